//! Comment header prepended to every output file.
//!
//! The header records the tool version, the subcommand, and the full
//! effective configuration (flag values after defaulting) as sorted
//! `# key value` lines. It deliberately contains no timestamps or host
//! information so that reruns with identical configuration produce
//! byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Display;

pub struct Header {
    subcommand: &'static str,
    entries: BTreeMap<String, String>,
}

impl Header {
    pub fn new(subcommand: &'static str) -> Self {
        Header {
            subcommand,
            entries: BTreeMap::new(),
        }
    }

    /// Records one configuration key. Values are formatted with `Display`,
    /// which for floats is the shortest representation that round-trips.
    pub fn kv(mut self, key: &str, value: impl Display) -> Self {
        self.entries.insert(key.to_string(), value.to_string());
        self
    }

    /// Records a key only when the option is set.
    pub fn kv_opt(self, key: &str, value: Option<impl Display>) -> Self {
        match value {
            Some(v) => self.kv(key, v),
            None => self,
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# pbit {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# subcommand {}\n", self.subcommand));
        for (k, v) in &self.entries {
            out.push_str(&format!("# {k} {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_sorted_and_versioned() {
        let h = Header::new("sample")
            .kv("seed", 7)
            .kv("events", 1000)
            .kv_opt("tau_circ", None::<f64>)
            .kv_opt("lambda0", Some(1.5e8));
        let text = h.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# pbit {}", env!("CARGO_PKG_VERSION")));
        assert_eq!(lines[1], "# subcommand sample");
        assert_eq!(lines[2], "# events 1000");
        assert_eq!(lines[3], "# lambda0 150000000");
        assert_eq!(lines[4], "# seed 7");
        assert_eq!(lines.len(), 5);
    }
}
