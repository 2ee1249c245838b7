//! Experiment configuration files (TOML, one experiment per file).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use fspec_core::field::ScalarField;
use fspec_core::spectral::{SolverMethod, SolverOptions};
use fspec_core::{FiberRule, MetricSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    TorusLargeEigenvalue,
    BilipschitzCheck,
    RandersIdentities,
    ConformalCheck,
    Convergence,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::TorusLargeEigenvalue => "torus-large-eigenvalue",
            ExperimentKind::BilipschitzCheck => "bilipschitz-check",
            ExperimentKind::RandersIdentities => "randers-identities",
            ExperimentKind::ConformalCheck => "conformal-check",
            ExperimentKind::Convergence => "convergence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Nodes per side of the square grid.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Initial fiber node count; doubled adaptively up to `fiber_max_nodes`.
    #[serde(default = "default_fiber_nodes")]
    pub fiber_nodes: usize,
    #[serde(default = "default_fiber_max_nodes")]
    pub fiber_max_nodes: usize,
    /// Number of nonzero eigenvalues to compute.
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub output: OutputSettings,
    pub torus: Option<TorusSettings>,
    pub bilipschitz: Option<BilipschitzSettings>,
    pub randers: Option<RandersSettings>,
    pub conformal: Option<ConformalSettings>,
    pub convergence: Option<ConvergenceSettings>,
}

fn default_grid() -> usize {
    64
}
fn default_fiber_nodes() -> usize {
    256
}
fn default_fiber_max_nodes() -> usize {
    4096
}
fn default_k() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative tolerance of spectral comparisons.
    pub spectral: f64,
    /// Pointwise field identities.
    pub pointwise: f64,
    /// Exact discrete identities (scaling laws).
    pub exact: f64,
    /// Two-route Randers energy comparison.
    pub energy: f64,
    /// Vanishing of odd angular integrals.
    pub cross_term: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { spectral: 0.01, pointwise: 1e-8, exact: 1e-10, energy: 1e-6, cross_term: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    pub method: SolverMethod,
    pub tol: f64,
    pub max_cycles: usize,
    pub seed: u64,
    pub dense_max_nodes: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let o = SolverOptions::default();
        SolverSettings {
            method: o.method,
            tol: o.tol,
            max_cycles: o.max_cycles,
            seed: o.seed,
            dense_max_nodes: o.dense_max_nodes,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSettings {
    pub dir: Option<PathBuf>,
    pub plots: bool,
    /// Also write `symbol.csv` and `spectrum.csv` for every solved case.
    pub tables: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSettings {
    /// Values of `h`; each row uses `r = 1/h`.
    pub h: Vec<f64>,
    /// Explicit `η` values solved for every `h`.
    #[serde(default)]
    pub eta: Vec<f64>,
    /// Add the threshold `η` of each `h`.
    #[serde(default = "yes")]
    pub threshold: bool,
    /// Add the `h = 1`, `η = 0` reference row.
    #[serde(default = "yes")]
    pub baseline: bool,
    /// Required ratio of the largest threshold row over the baseline.
    #[serde(default = "default_growth")]
    pub growth_factor: f64,
    /// Largest `η` accepted in a sweep.
    #[serde(default = "default_eta_cap")]
    pub eta_cap: f64,
}

fn yes() -> bool {
    true
}
fn default_growth() -> f64 {
    10.0
}
/// Large enough for the `h = 8` threshold `η ≈ 1 − 1.2e−7`.
pub const DEFAULT_ETA_CAP: f64 = 1.0 - 1e-8;
fn default_eta_cap() -> f64 {
    DEFAULT_ETA_CAP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricPair {
    pub name: String,
    pub metric: MetricSpec,
    pub reference: MetricSpec,
    /// Exact value of every `λ_k(F)/λ_k(F₀)`, when known.
    pub expected_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilipschitzSettings {
    pub pairs: Vec<MetricPair>,
    #[serde(default = "default_directions")]
    pub directions: usize,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_directions() -> usize {
    256
}
fn default_points() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMetric {
    pub name: String,
    pub metric: MetricSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandersSettings {
    /// Randers metrics checked for the volume, energy and weight identities.
    pub cases: Vec<NamedMetric>,
    /// `η` values for the angular integrals.
    #[serde(default = "default_angular_eta")]
    pub angular_eta: Vec<f64>,
    #[serde(default = "default_angular_nodes")]
    pub angular_nodes: usize,
    /// Trial functions `sin(2π(m x + n y))`, given as `[m, n]`.
    #[serde(default = "default_trial_modes")]
    pub trial_modes: Vec<[i32; 2]>,
    /// Check `C⁻¹ λ_k(σ) ≤ λ_k(F) ≤ C λ_k(σ)` for non-constant cases.
    #[serde(default = "yes")]
    pub weighted_bound: bool,
    /// Sampled `(x, v)` pairs per case for the Binet–Legendre chain.
    #[serde(default = "default_bl_points")]
    pub binet_legendre_points: usize,
    #[serde(default = "default_bl_directions")]
    pub binet_legendre_directions: usize,
}

fn default_angular_eta() -> Vec<f64> {
    vec![0.1, 0.5, 0.9, 0.99]
}
fn default_angular_nodes() -> usize {
    512
}
fn default_trial_modes() -> Vec<[i32; 2]> {
    vec![[1, 0], [0, 1], [1, 1], [2, -1]]
}
fn default_bl_points() -> usize {
    100
}
fn default_bl_directions() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConformalSettings {
    pub base: MetricSpec,
    pub factors: Vec<NamedFactor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedFactor {
    pub name: String,
    pub f: ScalarField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSettings {
    pub metric: MetricSpec,
    pub grids: Vec<usize>,
    /// Accepted band for the observed order.
    #[serde(default = "default_order_band")]
    pub order: [f64; 2],
}

fn default_order_band() -> [f64; 2] {
    // error ratio 4 ± 20% per doubling
    [3.2f64.log2(), 4.8f64.log2()]
}

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub fiber_nodes: Option<usize>,
    pub k: Option<usize>,
    pub out: Option<PathBuf>,
    pub plots: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        ExperimentConfig::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(n) = o.grid {
            self.grid = n;
        }
        if let Some(m) = o.fiber_nodes {
            self.fiber_nodes = m;
            self.fiber_max_nodes = self.fiber_max_nodes.max(m);
        }
        if let Some(k) = o.k {
            self.k = k;
        }
        if o.out.is_some() {
            self.output.dir = o.out.clone();
        }
        self.output.plots |= o.plots;
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.grid >= 8, "grid must be at least 8, got {}", self.grid);
        ensure!(self.fiber_nodes >= 16, "fiber_nodes must be at least 16");
        ensure!(self.fiber_max_nodes >= self.fiber_nodes, "fiber_max_nodes below fiber_nodes");
        ensure!((1..=50).contains(&self.k), "k must lie in 1..=50, got {}", self.k);
        let t = &self.tolerances;
        for (name, v) in [
            ("spectral", t.spectral),
            ("pointwise", t.pointwise),
            ("exact", t.exact),
            ("energy", t.energy),
            ("cross_term", t.cross_term),
        ] {
            ensure!(v > 0.0 && v.is_finite(), "tolerance {name} must be positive");
        }
        match self.experiment {
            ExperimentKind::TorusLargeEigenvalue => {
                let s = self.torus.as_ref().context("missing [torus] section")?;
                ensure!(!s.h.is_empty(), "[torus] h is empty");
                for &h in &s.h {
                    ensure!(h > 1.0, "[torus] needs h > 1, got {h}");
                }
                ensure!(s.eta_cap > 0.0 && s.eta_cap < 1.0, "[torus] eta_cap must lie in (0, 1)");
                for &e in &s.eta {
                    ensure!((0.0..1.0).contains(&e), "[torus] eta values must lie in [0, 1), got {e}");
                }
                ensure!(s.threshold || !s.eta.is_empty(), "[torus] has no eta values");
            }
            ExperimentKind::BilipschitzCheck => {
                let s = self.bilipschitz.as_ref().context("missing [bilipschitz] section")?;
                ensure!(!s.pairs.is_empty(), "[bilipschitz] has no pairs");
            }
            ExperimentKind::RandersIdentities => {
                let s = self.randers.as_ref().context("missing [randers] section")?;
                for c in &s.cases {
                    if !matches!(c.metric, MetricSpec::Randers { .. }) {
                        bail!("[randers] case {} is not a Randers metric", c.name);
                    }
                }
                for &e in &s.angular_eta {
                    ensure!((0.0..1.0).contains(&e), "[randers] angular_eta must lie in [0, 1)");
                }
            }
            ExperimentKind::ConformalCheck => {
                let s = self.conformal.as_ref().context("missing [conformal] section")?;
                ensure!(!s.factors.is_empty(), "[conformal] has no factors");
            }
            ExperimentKind::Convergence => {
                let s = self.convergence.as_ref().context("missing [convergence] section")?;
                ensure!(s.grids.len() >= 3, "[convergence] needs at least three grids");
                ensure!(s.grids.windows(2).all(|w| w[0] < w[1]), "[convergence] grids must increase");
                ensure!(s.grids[0] >= 8, "[convergence] grids must be at least 8");
            }
        }
        Ok(())
    }

    pub fn fiber_rule(&self) -> FiberRule {
        FiberRule { initial: self.fiber_nodes, max: self.fiber_max_nodes, ..FiberRule::default() }
    }

    pub fn solver_options(&self) -> SolverOptions {
        let s = &self.solver;
        SolverOptions {
            method: s.method,
            tol: s.tol,
            max_cycles: s.max_cycles,
            seed: s.seed,
            dense_max_nodes: s.dense_max_nodes,
        }
    }

    /// Canonical TOML of the effective configuration.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// SHA-256 of [`canonical`](Self::canonical), first 16 hex digits.
    /// The `[output]` section is left out: it does not change any number.
    pub fn hash(&self) -> String {
        let numeric = ExperimentConfig { output: OutputSettings::default(), ..self.clone() };
        let digest = Sha256::digest(numeric.canonical().as_bytes());
        hex::encode(&digest[..8])
    }

    /// Flattened `path → value` echo; floats printed with 17 significant
    /// digits.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let value = toml::Value::try_from(self).expect("configuration serializes");
        let mut out = BTreeMap::new();
        flatten("", &value, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &toml::Value, out: &mut BTreeMap<String, String>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        toml::Value::Table(t) => {
            for (k, v) in t {
                flatten(&join(k), v, out);
            }
        }
        toml::Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        toml::Value::Float(x) => {
            out.insert(prefix.to_string(), format!("{x:.16e}"));
        }
        toml::Value::String(s) => {
            out.insert(prefix.to_string(), s.clone());
        }
        other => {
            out.insert(prefix.to_string(), other.to_string());
        }
    }
}
