//! Ensemble geometry: where does a bundle of trajectories stop being one
//! stream and become two? Per step, the ensemble's positions are clustered
//! with 2-means; the first step whose clusters separate cleanly is the
//! bifurcation point, reported as mean distance travelled from the start.

use super::fly::{Termination, Trajectory};
use crate::analysis::shannon_entropy;

/// The first step at which an ensemble splits into two clusters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSplit {
    pub step: usize,
    /// Mean distance of the ensemble from the start at the split step.
    pub distance: f64,
    pub inter_cluster: f64,
    pub mean_intra_spread: f64,
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Deterministic 2-means: seeds at the extreme-x points (ties broken by y),
/// Lloyd iterations to a fixed point. Returns the centroids and per-point
/// assignment, or `None` when all points coincide.
pub fn two_means(points: &[[f64; 2]]) -> Option<([f64; 2], [f64; 2], Vec<bool>)> {
    let lo = points
        .iter()
        .copied()
        .min_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])))?;
    let hi = points
        .iter()
        .copied()
        .max_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])))?;
    if lo == hi {
        return None;
    }
    let mut c = [lo, hi];
    let mut assign = vec![false; points.len()];
    for _ in 0..64 {
        let mut changed = false;
        for (a, p) in assign.iter_mut().zip(points) {
            let right = dist(*p, c[1]) < dist(*p, c[0]);
            if right != *a {
                *a = right;
                changed = true;
            }
        }
        let mut sums = [[0.0f64; 2]; 2];
        let mut counts = [0usize; 2];
        for (a, p) in assign.iter().zip(points) {
            let k = *a as usize;
            sums[k][0] += p[0];
            sums[k][1] += p[1];
            counts[k] += 1;
        }
        // An emptied cluster means one blob: keep the previous centroid.
        for k in 0..2 {
            if counts[k] > 0 {
                c[k] = [sums[k][0] / counts[k] as f64, sums[k][1] / counts[k] as f64];
            }
        }
        if !changed {
            break;
        }
    }
    Some((c[0], c[1], assign))
}

/// Scans the ensemble step by step (terminated trajectories hold their final
/// position) and returns the first step where the inter-centroid distance
/// exceeds `ratio` times the mean intra-cluster spread. A split must divide
/// the bundle into two actual streams, so two degenerate verdicts are skipped:
/// steps where 2-means strands fewer than a quarter of the trajectories in one
/// cluster (a few noise outliers against a tight blob), and steps where the
/// centroids sit closer than `min_separation` (structure smaller than one
/// move, e.g. an exactly-coincident core against its sampling halo, cannot be
/// distinguished from single-stream noise; pass the world's `v0`).
pub fn first_split(
    trajectories: &[Trajectory],
    ratio: f64,
    min_separation: f64,
) -> Option<EnsembleSplit> {
    if trajectories.is_empty() {
        return None;
    }
    let start = trajectories[0].start;
    let horizon = trajectories.iter().map(|t| t.steps.len()).max()?;
    for step in 0..=horizon {
        let points: Vec<[f64; 2]> = trajectories.iter().map(|t| t.position_at(step)).collect();
        let Some((c0, c1, assign)) = two_means(&points) else {
            continue;
        };
        let right = assign.iter().filter(|&&a| a).count();
        if 4 * right.min(points.len() - right) < points.len() {
            continue;
        }
        let inter = dist(c0, c1);
        if inter < min_separation {
            continue;
        }
        let intra = points
            .iter()
            .zip(&assign)
            .map(|(p, &a)| dist(*p, if a { c1 } else { c0 }))
            .sum::<f64>()
            / points.len() as f64;
        if inter > ratio * intra {
            let distance =
                points.iter().map(|p| dist(*p, start)).sum::<f64>() / points.len() as f64;
            return Some(EnsembleSplit {
                step,
                distance,
                inter_cluster: inter,
                mean_intra_spread: intra,
            });
        }
    }
    None
}

/// How many trajectories ended at each of `k` targets (step-cap runs are
/// not counted).
pub fn choice_counts(trajectories: &[Trajectory], k: usize) -> Vec<usize> {
    let mut counts = vec![0usize; k];
    for t in trajectories {
        if let Termination::ReachedTarget(i) = t.termination {
            counts[i] += 1;
        }
    }
    counts
}

/// Shannon entropy (nats) of the empirical choice distribution.
pub fn choice_entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    shannon_entropy(&probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuro::fly::FlyStep;
    use approx::assert_abs_diff_eq;

    fn straight_line(start: [f64; 2], step: [f64; 2], n: usize, hit: Option<usize>) -> Trajectory {
        let mut position = start;
        let steps = (0..n)
            .map(|_| {
                position = [position[0] + step[0], position[1] + step[1]];
                FlyStep {
                    position,
                    velocity: step,
                    state: vec![1],
                }
            })
            .collect();
        Trajectory {
            start,
            steps,
            termination: match hit {
                Some(k) => Termination::ReachedTarget(k),
                None => Termination::StepCap,
            },
        }
    }

    #[test]
    fn two_means_separates_two_blobs() {
        let points = [
            [0.0, 0.0],
            [0.1, 0.1],
            [-0.1, 0.0],
            [10.0, 0.0],
            [10.1, -0.1],
            [9.9, 0.1],
        ];
        let (c0, c1, assign) = two_means(&points).unwrap();
        assert!(c0[0] < 1.0 && c1[0] > 9.0);
        assert_eq!(assign, vec![false, false, false, true, true, true]);

        assert!(two_means(&[[1.0, 2.0]; 5]).is_none());
        assert!(two_means(&[]).is_none());
    }

    #[test]
    fn split_point_sees_divergence_not_shared_drift() {
        // Ten trajectories march together for 10 steps, then half veer left
        // and half veer right.
        let mut trajectories = Vec::new();
        for i in 0..10 {
            let side = if i % 2 == 0 { -1.0 } else { 1.0 };
            let mut position = [0.0, 0.0];
            let mut steps = Vec::new();
            for t in 0..30 {
                let v = if t < 10 { [0.0, 1.0] } else { [side * 1.0, 1.0] };
                position = [position[0] + v[0], position[1] + v[1]];
                steps.push(FlyStep {
                    position,
                    velocity: v,
                    state: vec![1],
                });
            }
            trajectories.push(Trajectory {
                start: [0.0, 0.0],
                steps,
                termination: Termination::StepCap,
            });
        }
        let split = first_split(&trajectories, 4.0, 0.0).unwrap();
        assert!(split.step >= 10, "split at {} during shared drift", split.step);
        assert!(split.distance > 10.0);
        assert_eq!(split.mean_intra_spread, 0.0);

        // A bundle that never separates reports no split.
        let parallel: Vec<Trajectory> = (0..6)
            .map(|_| straight_line([0.0, 0.0], [0.0, 1.0], 20, None))
            .collect();
        assert!(first_split(&parallel, 4.0, 0.0).is_none());
    }

    #[test]
    fn a_few_outliers_are_not_a_split() {
        // 18 trajectories march straight up while 2 veer off: one stray pair
        // against a tight blob is not a bifurcation of the bundle.
        let mut trajectories: Vec<Trajectory> = (0..18)
            .map(|_| straight_line([0.0, 0.0], [0.0, 1.0], 30, None))
            .collect();
        for _ in 0..2 {
            trajectories.push(straight_line([0.0, 0.0], [3.0, 1.0], 30, None));
        }
        assert!(first_split(&trajectories, 4.0, 0.0).is_none());

        // An even 10/10 divergence with the same geometry is a split.
        let mut even: Vec<Trajectory> = (0..10)
            .map(|_| straight_line([0.0, 0.0], [-3.0, 1.0], 30, None))
            .collect();
        for _ in 0..10 {
            even.push(straight_line([0.0, 0.0], [3.0, 1.0], 30, None));
        }
        assert!(first_split(&even, 4.0, 0.0).is_some());
    }

    #[test]
    fn min_separation_ignores_sub_step_structure() {
        // Fifteen trajectories on the exact same line plus five offset by two
        // units: zero intra-cluster spread makes the ratio fire at any scale,
        // but centroids two units apart are not two streams when a single
        // move spans ten.
        let mut trajectories: Vec<Trajectory> = (0..15)
            .map(|_| straight_line([0.0, 0.0], [0.0, 10.0], 30, None))
            .collect();
        for _ in 0..5 {
            trajectories.push(straight_line([2.0, 0.0], [0.0, 10.0], 30, None));
        }
        assert!(first_split(&trajectories, 4.0, 10.0).is_none());
        let split = first_split(&trajectories, 4.0, 0.0).unwrap();
        assert_eq!(split.step, 0);
    }

    #[test]
    fn counts_and_entropy_track_choices() {
        let trajectories = vec![
            straight_line([0.0, 0.0], [1.0, 0.0], 3, Some(0)),
            straight_line([0.0, 0.0], [1.0, 0.0], 3, Some(1)),
            straight_line([0.0, 0.0], [1.0, 0.0], 3, Some(1)),
            straight_line([0.0, 0.0], [1.0, 0.0], 3, None),
        ];
        let counts = choice_counts(&trajectories, 2);
        assert_eq!(counts, vec![1, 2]);
        let h = choice_entropy(&counts);
        let want = -(1.0f64 / 3.0) * (1.0f64 / 3.0).ln() - (2.0f64 / 3.0) * (2.0f64 / 3.0).ln();
        assert_abs_diff_eq!(h, want, epsilon = 1e-12);
        assert_eq!(choice_entropy(&[0, 0]), 0.0);
    }
}
