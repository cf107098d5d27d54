//! Suite configuration: flags, an optional JSON file, and parsing of the
//! datum, base-algebra and window descriptors.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use uchi::coeff::BaseAlgebra;
use uchi::gradedmod::{Ambient, SubalgebraSpec};
use uchi::rootdata::{build_from_type, build_gl, ChevalleyDatum, LeviSpec};
use uchi::weyl::Window;
use uchi::Scalar;

use crate::CliError;

/// Root datum selector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatumSel {
    Gl(usize),
    Cartan(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything a command needs; round-trips through JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub datum: DatumSel,
    pub p: u32,
    /// simple roots of `I`, numbered from 1
    pub levi: Vec<usize>,
    /// `field:q`, `dual:q` or `trunc:q:k`
    pub base: String,
    /// `h1=c0:c1:...,h2=...` coordinates of `pi(h_j)` in the basis of `A`
    pub pi: String,
    pub window: (i32, i32),
    pub suites: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub out: Option<PathBuf>,
    /// `None` selects the command's own default
    pub format: Option<Format>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            datum: DatumSel::Gl(2),
            p: 3,
            levi: Vec::new(),
            base: String::new(),
            pi: String::new(),
            window: (-1, 1),
            suites: Vec::new(),
            seed: uchi::structure::DEFAULT_SEED,
            samples: 50,
            out: None,
            format: None,
        }
    }
}

/// Flags shared by every command; each overrides the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct ConfigArgs {
    /// JSON file with a full or partial configuration
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// general linear group of this rank
    #[arg(long, conflicts_with = "cartan")]
    pub gl: Option<usize>,
    /// Cartan type such as A2, B2, C3, D4, G2
    #[arg(long)]
    pub cartan: Option<String>,
    #[arg(long)]
    pub p: Option<u32>,
    /// simple roots of I, numbered from 1, e.g. 1,2
    #[arg(long, value_delimiter = ',')]
    pub levi: Option<Vec<usize>>,
    /// field:q, dual:q or trunc:q:k
    #[arg(long)]
    pub base: Option<String>,
    /// pi(h_j) as h1=c0:c1,h2=c0:c1 in the basis of the base algebra
    #[arg(long)]
    pub pi: Option<String>,
    /// coordinate range a..b for every weight coordinate
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub suite: Option<Vec<String>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// random instances per check
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl ConfigArgs {
    /// The config file (if any) with every given flag applied on top.
    pub fn resolve(&self) -> Result<SuiteConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
            }
            None => SuiteConfig::default(),
        };
        if let Some(n) = self.gl {
            c.datum = DatumSel::Gl(n);
        }
        if let Some(t) = &self.cartan {
            c.datum = DatumSel::Cartan(t.clone());
        }
        if let Some(p) = self.p {
            c.p = p;
        }
        if let Some(l) = &self.levi {
            c.levi = l.clone();
        }
        if let Some(b) = &self.base {
            c.base = b.clone();
        }
        if let Some(pi) = &self.pi {
            c.pi = pi.clone();
        }
        if let Some(w) = &self.window {
            c.window = parse_window(w)?;
        }
        if let Some(s) = &self.suite {
            c.suites = s.clone();
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(s) = self.samples {
            c.samples = s;
        }
        if let Some(o) = &self.out {
            c.out = Some(o.clone());
        }
        if let Some(f) = self.format {
            c.format = Some(f);
        }
        for s in &c.suites {
            if !uchi::verify::SUITES.contains(&s.as_str()) {
                return Err(CliError::Input(format!("unknown suite {s}")));
            }
        }
        Ok(c)
    }
}

/// `a..b`, with negative bounds allowed.
pub fn parse_window(s: &str) -> Result<(i32, i32), CliError> {
    let bad = || CliError::Input(format!("window {s:?} is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Comma-separated integer coordinates.
pub fn parse_weight(s: &str) -> Result<Vec<i32>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Input(format!("bad weight coordinate {x:?}"))))
        .collect()
}

impl SuiteConfig {
    pub fn build_datum(&self) -> Result<ChevalleyDatum, CliError> {
        Ok(match &self.datum {
            DatumSel::Gl(n) => build_gl(*n, self.p)?,
            DatumSel::Cartan(t) => build_from_type(t, self.p)?,
        })
    }

    pub fn window_for(&self, d: usize) -> Window {
        Window::new(d, self.window.0, self.window.1)
    }

    /// The ambient of `U_chi` for the standard Levi form of `I`.
    pub fn ambient<S: Scalar>(&self) -> Result<Arc<Ambient<S>>, CliError> {
        let datum = Arc::new(self.build_datum()?);
        let levi = LeviSpec::new(&datum, self.levi.iter().map(|&i| i.wrapping_sub(1)).collect())?;
        let base = Arc::new(self.base_algebra::<S>(datum.d)?);
        Ok(Ambient::standard(datum, levi, base, SubalgebraSpec::Full)?)
    }

    fn base_algebra<S: Scalar>(&self, d: usize) -> Result<BaseAlgebra<S>, CliError> {
        let p = self.p as usize;
        let parts: Vec<&str> = if self.base.is_empty() { vec!["field", ""] } else { self.base.split(':').collect() };
        let num = |s: &str| -> Result<usize, CliError> {
            s.parse().map_err(|_| CliError::Input(format!("bad number {s:?} in base {:?}", self.base)))
        };
        let q = if parts.len() > 1 && !parts[1].is_empty() { num(parts[1])? } else { p };
        let (kind, dim) = match (parts[0], parts.len()) {
            ("field", 1 | 2) => {
                let mut k = 0;
                let mut r = 1;
                while r < q {
                    r *= p;
                    k += 1;
                }
                if r != q || k == 0 {
                    return Err(CliError::Input(format!("{q} is not a power of p = {p}")));
                }
                ("field", k)
            }
            ("dual", 1 | 2) if q == p => ("trunc", 2),
            ("trunc", 3) if q == p => ("trunc", num(parts[2])?),
            _ => return Err(CliError::Input(format!("unrecognised base {:?}", self.base))),
        };
        let pi = self.parse_pi::<S>(d, dim)?;
        Ok(match kind {
            "field" if dim == 1 => BaseAlgebra::prime_field(pi.into_iter().map(|v| v[0]).collect()),
            "field" => BaseAlgebra::extension_field(dim, pi)?,
            _ => BaseAlgebra::truncated_poly(dim, pi)?,
        })
    }

    fn parse_pi<S: Scalar>(&self, d: usize, dim: usize) -> Result<Vec<Vec<S>>, CliError> {
        let mut pi = vec![vec![S::zero(); dim]; d];
        for item in self.pi.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || CliError::Input(format!("bad pi entry {item:?}"));
            let (h, val) = item.split_once('=').ok_or_else(bad)?;
            let j: usize = h.trim().strip_prefix('h').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if j == 0 || j > d {
                return Err(CliError::Input(format!("pi index h{j} outside 1..={d}")));
            }
            let coords: Vec<i64> = val.split(':').map(|c| c.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
            if coords.len() > dim {
                return Err(CliError::Input(format!("pi entry {item:?} has more than {dim} coordinates")));
            }
            for (i, c) in coords.into_iter().enumerate() {
                pi[j - 1][i] = S::from_i64(c);
            }
        }
        Ok(pi)
    }
}
