//! Plain-text model files.
//!
//! ```text
//! pbit-model v1
//! domain plusminus
//! sign ferromagnetic
//! n 9
//! biases
//! 0 0.5
//! couplings
//! 0 1 -1
//! 1 2 2.5
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. The `biases` section
//! lists `index value` rows (omitted spins default to zero); `couplings`
//! lists `i j value` rows. Duplicate pairs, self-loops, and out-of-range
//! indices are rejected. The writer emits shortest-roundtrip floats, so
//! write-then-parse reproduces the model exactly.

use crate::model::{EnergySign, IsingModel, ModelError, SpinDomain};
use thiserror::Error;

const MAGIC: &str = "pbit-model v1";

#[derive(Debug, Error, PartialEq)]
pub enum ModelFileError {
    #[error("missing or wrong format line (expected `{MAGIC}`)")]
    BadMagic,
    #[error("line {line}: expected `{expected}`")]
    Expected { line: usize, expected: String },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: duplicate bias for spin {index}")]
    DuplicateBias { line: usize, index: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Serializes a model to the text format.
pub fn write_model(model: &IsingModel) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(match model.domain() {
        SpinDomain::PlusMinus => "domain plusminus\n",
        SpinDomain::ZeroOne => "domain zeroone\n",
    });
    out.push_str(match model.sign() {
        EnergySign::AsWritten => "sign as-written\n",
        EnergySign::Ferromagnetic => "sign ferromagnetic\n",
    });
    out.push_str(&format!("n {}\n", model.n()));
    out.push_str("biases\n");
    for (i, &b) in model.biases().iter().enumerate() {
        if b != 0.0 {
            out.push_str(&format!("{i} {b}\n"));
        }
    }
    out.push_str("couplings\n");
    for c in model.couplings() {
        out.push_str(&format!("{} {} {}\n", c.i, c.j, c.weight));
    }
    out
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    peeked: Option<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            iter: text.lines().enumerate(),
            peeked: None,
        }
    }

    /// Next significant line as (1-based number, trimmed content).
    fn next(&mut self) -> Option<(usize, &'a str)> {
        if let Some(p) = self.peeked.take() {
            return Some(p);
        }
        for (idx, raw) in self.iter.by_ref() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((idx + 1, t));
        }
        None
    }

    fn peek(&mut self) -> Option<(usize, &'a str)> {
        if self.peeked.is_none() {
            self.peeked = self.next();
        }
        self.peeked
    }
}

fn parse_field<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ModelFileError> {
    tok.parse().map_err(|_| ModelFileError::Malformed {
        line,
        msg: format!("cannot parse {what} from {tok:?}"),
    })
}

/// Parses the text format produced by [`write_model`].
pub fn parse_model(text: &str) -> Result<IsingModel, ModelFileError> {
    let mut lines = Lines::new(text);
    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        _ => return Err(ModelFileError::BadMagic),
    }

    let (line, l) = lines.next().ok_or(ModelFileError::Expected {
        line: 0,
        expected: "domain ...".into(),
    })?;
    let domain = match l {
        "domain plusminus" => SpinDomain::PlusMinus,
        "domain zeroone" => SpinDomain::ZeroOne,
        _ => {
            return Err(ModelFileError::Expected {
                line,
                expected: "domain plusminus|zeroone".into(),
            })
        }
    };

    let (line, l) = lines.next().ok_or(ModelFileError::Expected {
        line: 0,
        expected: "sign ...".into(),
    })?;
    let sign = match l {
        "sign as-written" => EnergySign::AsWritten,
        "sign ferromagnetic" => EnergySign::Ferromagnetic,
        _ => {
            return Err(ModelFileError::Expected {
                line,
                expected: "sign as-written|ferromagnetic".into(),
            })
        }
    };

    let (line, l) = lines.next().ok_or(ModelFileError::Expected {
        line: 0,
        expected: "n <count>".into(),
    })?;
    let n: usize = match l.strip_prefix("n ") {
        Some(rest) => parse_field(rest.trim(), line, "spin count")?,
        None => {
            return Err(ModelFileError::Expected {
                line,
                expected: "n <count>".into(),
            })
        }
    };

    match lines.next() {
        Some((_, "biases")) => {}
        Some((line, _)) => {
            return Err(ModelFileError::Expected {
                line,
                expected: "biases".into(),
            })
        }
        None => {
            return Err(ModelFileError::Expected {
                line: 0,
                expected: "biases".into(),
            })
        }
    }

    let mut biases = vec![0.0f64; n];
    let mut seen = vec![false; n];
    loop {
        let Some((line, l)) = lines.peek() else { break };
        if l == "couplings" {
            break;
        }
        lines.next();
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ModelFileError::Malformed {
                line,
                msg: format!("expected `index value`, got {l:?}"),
            });
        }
        let i: usize = parse_field(toks[0], line, "spin index")?;
        let v: f64 = parse_field(toks[1], line, "bias value")?;
        if i >= n {
            return Err(ModelError::IndexOutOfRange { index: i, n }.into());
        }
        if seen[i] {
            return Err(ModelFileError::DuplicateBias { line, index: i });
        }
        seen[i] = true;
        biases[i] = v;
    }

    match lines.next() {
        Some((_, "couplings")) => {}
        Some((line, _)) => {
            return Err(ModelFileError::Expected {
                line,
                expected: "couplings".into(),
            })
        }
        None => {
            return Err(ModelFileError::Expected {
                line: 0,
                expected: "couplings".into(),
            })
        }
    }

    let mut couplings = Vec::new();
    while let Some((line, l)) = lines.next() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(ModelFileError::Malformed {
                line,
                msg: format!("expected `i j value`, got {l:?}"),
            });
        }
        let i: usize = parse_field(toks[0], line, "spin index")?;
        let j: usize = parse_field(toks[1], line, "spin index")?;
        let w: f64 = parse_field(toks[2], line, "coupling value")?;
        couplings.push((i, j, w));
    }

    Ok(IsingModel::new(domain, sign, biases, couplings)?)
}
