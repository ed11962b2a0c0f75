//! Exchange-constant sets `α₁ … α_{N-1}`.
//!
//! Analytic values exist for the box trap. Harmonic, quartic and other
//! traps are ingested from JSON or CSV files produced by external tools.

use std::f64::consts::PI;
use std::fs;
use std::io::Read;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default log-uniform range for random weights.
pub const DEFAULT_RANDOM_RANGE: (f64, f64) = (0.1, 10.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Uniform,
    Box {
        length: f64,
    },
    Random {
        seed: u64,
        low: f64,
        high: f64,
    },
    File {
        path: String,
        potential: String,
        source: String,
        l_or_omega: Option<f64>,
    },
    Explicit,
}

/// The `N-1` nearest-neighbour exchange constants of an `N`-particle trap.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSet {
    alphas: Vec<f64>,
    provenance: Provenance,
}

impl WeightSet {
    /// Validates length and strict positivity. Zero weights would disconnect
    /// the graph and are rejected.
    pub fn new(n: usize, alphas: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if n < 2 && !alphas.is_empty() {
            return Err(Error::InvalidWeights(format!("n = {n} takes no weights")));
        }
        let expected = n.saturating_sub(1);
        if alphas.len() != expected {
            return Err(Error::InvalidWeights(format!(
                "expected {expected} alphas for n = {n}, got {}",
                alphas.len()
            )));
        }
        if let Some((k, a)) = alphas
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.is_finite() && **a > 0.0))
        {
            return Err(Error::InvalidWeights(format!(
                "alpha_{} = {a} must be positive and finite",
                k + 1
            )));
        }
        Ok(WeightSet { alphas, provenance })
    }

    /// Weights given directly, as from the command line or a graph file.
    pub fn explicit(alphas: Vec<f64>) -> Result<Self> {
        let n = alphas.len() + 1;
        WeightSet::new(n, alphas, Provenance::Explicit)
    }

    /// The empty set for a single particle (no bonds).
    pub fn single_particle() -> Self {
        WeightSet {
            alphas: Vec::new(),
            provenance: Provenance::Uniform,
        }
    }

    /// Particle count `N`.
    pub fn n(&self) -> usize {
        self.alphas.len() + 1
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// `α_k` for `k` in `1..=N-1`.
    pub fn alpha(&self, k: usize) -> f64 {
        self.alphas[k - 1]
    }

    /// `d = Σ α_k`, the degree of every vertex of the Cayley graph.
    pub fn total(&self) -> f64 {
        self.alphas.iter().sum()
    }

    /// `max(1, d)`, the scale used for absolute tolerances.
    pub fn scale(&self) -> f64 {
        self.total().max(1.0)
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

pub fn uniform_weights(n: usize, alpha: f64) -> Result<WeightSet> {
    if n < 2 {
        return Err(Error::InvalidWeights(format!("need n >= 2, got {n}")));
    }
    WeightSet::new(n, vec![alpha; n - 1], Provenance::Uniform)
}

/// Uniform exchange constant of `N` fermions in a hard-wall box of size `L`.
///
/// Matching the uniform path gap `2α(1 - cos(π/N))` to the closed-form box
/// gap gives `α = π² N (N+1)(2N+1) / (6 L³)`.
pub fn box_alpha(n: usize, length: f64) -> Result<f64> {
    check_box(n, length)?;
    let n = n as f64;
    Ok(PI * PI * n * (n + 1.0) * (2.0 * n + 1.0) / (6.0 * length.powi(3)))
}

pub fn box_weights(n: usize, length: f64) -> Result<WeightSet> {
    let alpha = box_alpha(n, length)?;
    WeightSet::new(n, vec![alpha; n - 1], Provenance::Box { length })
}

pub(crate) fn check_box(n: usize, length: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("box needs n >= 2, got {n}")));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::OutOfRange(format!("box length {length} must be positive")));
    }
    Ok(())
}

/// Log-uniform draws in `[low, high]`, reproducible from `seed`.
pub fn random_weights(n: usize, seed: u64, range: (f64, f64)) -> Result<WeightSet> {
    let (low, high) = range;
    if n < 2 {
        return Err(Error::InvalidWeights(format!("need n >= 2, got {n}")));
    }
    if !(low.is_finite() && high.is_finite() && low > 0.0 && high >= low) {
        return Err(Error::InvalidWeights(format!("invalid range [{low}, {high}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ln_lo, ln_hi) = (low.ln(), high.ln());
    let alphas = (0..n - 1)
        .map(|_| {
            let u: f64 = rng.gen();
            (ln_lo + u * (ln_hi - ln_lo)).exp().clamp(low, high)
        })
        .collect();
    WeightSet::new(n, alphas, Provenance::Random { seed, low, high })
}

/// On-disk JSON form of a weight set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFile {
    pub n: usize,
    pub potential: String,
    #[serde(rename = "L_or_omega")]
    pub l_or_omega: Option<f64>,
    pub alphas: Vec<f64>,
    pub source: String,
}

impl WeightFile {
    pub fn from_weights(w: &WeightSet, potential: &str, source: &str) -> Self {
        let l_or_omega = match w.provenance() {
            Provenance::Box { length } => Some(*length),
            Provenance::File { l_or_omega, .. } => *l_or_omega,
            _ => None,
        };
        WeightFile {
            n: w.n(),
            potential: potential.to_string(),
            l_or_omega,
            alphas: w.alphas().to_vec(),
            source: source.to_string(),
        }
    }

    fn into_weights(self, path: &str) -> Result<WeightSet> {
        WeightSet::new(
            self.n,
            self.alphas,
            Provenance::File {
                path: path.to_string(),
                potential: self.potential,
                source: self.source,
                l_or_omega: self.l_or_omega,
            },
        )
        .map_err(|e| Error::Parse {
            context: path.to_string(),
            message: e.to_string(),
        })
    }
}

/// Loads a weight file, choosing JSON or CSV by extension (`.csv` means CSV,
/// anything else JSON).
pub fn load_weights(path: impl AsRef<Path>) -> Result<WeightSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        context: path.display().to_string(),
        message: e.to_string(),
    })?;
    let name = path.display().to_string();
    if is_csv(path) {
        parse_csv(&text, &name)
    } else {
        parse_json(&text, &name)
    }
}

/// Reads a JSON weight file from any reader.
pub fn read_weights_json(mut reader: impl Read, name: &str) -> Result<WeightSet> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_json(&text, name)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn parse_json(text: &str, name: &str) -> Result<WeightSet> {
    let file: WeightFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("{name}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    file.into_weights(name)
}

fn parse_csv(text: &str, name: &str) -> Result<WeightSet> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse {
        context: format!("{name}:1"),
        message: e.to_string(),
    })?;
    if headers.len() != 2 || &headers[0] != "k" || &headers[1] != "alpha" {
        return Err(Error::Parse {
            context: format!("{name}:1"),
            message: format!("expected header `k,alpha`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut alphas = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            context: format!("{name}:{}", e.position().map_or(0, |p| p.line())),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, what: &str| -> Result<&str> {
            record.get(i).ok_or_else(|| Error::Parse {
                context: format!("{name}:{line}"),
                message: format!("missing `{what}`"),
            })
        };
        let k: usize = field(0, "k")?.parse().map_err(|e| Error::Parse {
            context: format!("{name}:{line}, field k"),
            message: format!("{e}"),
        })?;
        let alpha: f64 = field(1, "alpha")?.parse().map_err(|e| Error::Parse {
            context: format!("{name}:{line}, field alpha"),
            message: format!("{e}"),
        })?;
        if k != alphas.len() + 1 {
            return Err(Error::Parse {
                context: format!("{name}:{line}, field k"),
                message: format!("expected k = {}, got {k}", alphas.len() + 1),
            });
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Parse {
                context: format!("{name}:{line}, field alpha"),
                message: format!("alpha_{k} = {alpha} must be positive and finite"),
            });
        }
        alphas.push(alpha);
    }
    let n = alphas.len() + 1;
    WeightSet::new(
        n,
        alphas,
        Provenance::File {
            path: name.to_string(),
            potential: "unspecified".into(),
            source: name.to_string(),
            l_or_omega: None,
        },
    )
    .map_err(|e| Error::Parse {
        context: name.to_string(),
        message: e.to_string(),
    })
}

/// Writes `w` as a JSON weight file. Floats use shortest round-trip
/// formatting, so reloading reproduces every bit.
pub fn save_weights(w: &WeightSet, path: impl AsRef<Path>, potential: &str, source: &str) -> Result<()> {
    let path = path.as_ref();
    if is_csv(path) {
        let mut out = String::from("k,alpha\n");
        for (k, a) in w.alphas().iter().enumerate() {
            out.push_str(&format!("{},{}\n", k + 1, a));
        }
        fs::write(path, out)?;
    } else {
        let file = WeightFile::from_weights(w, potential, source);
        let text = serde_json::to_string_pretty(&file).map_err(|e| Error::Parse {
            context: path.display().to_string(),
            message: e.to_string(),
        })?;
        fs::write(path, text + "\n")?;
    }
    Ok(())
}
