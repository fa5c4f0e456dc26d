//! Run parameters. Flags override the config file, which overrides defaults;
//! the resolved values are echoed into every report.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use innerkit::{SequenceKind, ZeroSequence};
use serde::{Deserialize, Serialize};

/// One layer of optional settings, as read from a config file or flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub seq: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    #[serde(rename = "J")]
    pub j: Option<usize>,
    pub alpha: Option<f64>,
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub depth: Option<u32>,
    pub grid_q: Option<u32>,
    pub seed: Option<u64>,
    pub cases: Option<usize>,
    pub input: Option<PathBuf>,
}

impl Layer {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Layer) -> Layer {
        Layer {
            seq: self.seq.or(lower.seq),
            a: self.a.or(lower.a),
            b: self.b.or(lower.b),
            j: self.j.or(lower.j),
            alpha: self.alpha.or(lower.alpha),
            k: self.k.or(lower.k),
            n: self.n.or(lower.n),
            eps: self.eps.or(lower.eps),
            depth: self.depth.or(lower.depth),
            grid_q: self.grid_q.or(lower.grid_q),
            seed: self.seed.or(lower.seed),
            cases: self.cases.or(lower.cases),
            input: self.input.or(lower.input),
        }
    }
}

/// Fully resolved settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub seq: String,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "J")]
    pub j: usize,
    pub alpha: f64,
    pub k: usize,
    pub n: Option<usize>,
    pub eps: f64,
    pub depth: u32,
    pub grid_q: u32,
    pub seed: u64,
    pub cases: Option<usize>,
    pub input: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seq: "spiral".into(),
            a: 0.25,
            b: 0.5,
            j: 30,
            alpha: 2.5,
            k: 2,
            n: None,
            eps: 0.1,
            depth: 8,
            grid_q: 12,
            seed: 0,
            cases: None,
            input: None,
        }
    }
}

impl Config {
    pub fn resolve(layer: Layer) -> anyhow::Result<Config> {
        let d = Config::default();
        let c = Config {
            seq: layer.seq.unwrap_or(d.seq),
            a: layer.a.unwrap_or(d.a),
            b: layer.b.unwrap_or(d.b),
            j: layer.j.unwrap_or(d.j),
            alpha: layer.alpha.unwrap_or(d.alpha),
            k: layer.k.unwrap_or(d.k),
            n: layer.n,
            eps: layer.eps.unwrap_or(d.eps),
            depth: layer.depth.unwrap_or(d.depth),
            grid_q: layer.grid_q.unwrap_or(d.grid_q),
            seed: layer.seed.unwrap_or(d.seed),
            cases: layer.cases,
            input: layer.input,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if !matches!(self.seq.as_str(), "spiral" | "radial" | "custom") {
            bail!("unknown sequence kind {:?} (expected spiral, radial or custom)", self.seq);
        }
        if self.j == 0 {
            bail!("J must be at least 1");
        }
        if !(self.alpha > 0.0) {
            bail!("alpha must be positive");
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            bail!("eps must lie in (0, 1)");
        }
        if self.grid_q == 0 || self.grid_q > 24 {
            bail!("grid-q must lie in 1..=24");
        }
        Ok(())
    }

    /// The sequence named by `seq`, `a`, `b` and `J`; custom sequences are
    /// read from `input`.
    pub fn sequence(&self) -> anyhow::Result<ZeroSequence> {
        let kind = match self.seq.as_str() {
            "spiral" => SequenceKind::Spiral { a: self.a, b: self.b },
            "radial" => SequenceKind::Radial { a: self.a },
            _ => {
                let path = self
                    .input
                    .as_ref()
                    .ok_or_else(|| crate::UsageError(anyhow::anyhow!("a custom sequence needs --input <sequence.json>")))?;
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                return Ok(ZeroSequence::from_json(&text)?);
            }
        };
        Ok(innerkit::gen_sequence(kind, self.j)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = Layer { j: Some(40), a: Some(0.3), ..Default::default() };
        let flags = Layer { j: Some(20), ..Default::default() };
        let c = Config::resolve(flags.over(file)).unwrap();
        assert_eq!((c.j, c.a, c.b), (20, 0.3, 0.5));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Config::resolve(Layer { seq: Some("zigzag".into()), ..Default::default() }).is_err());
        assert!(Config::resolve(Layer { eps: Some(1.5), ..Default::default() }).is_err());
        assert!(serde_json::from_str::<Layer>(r#"{"bogus": 1}"#).is_err());
    }
}
