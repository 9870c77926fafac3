//! Scenario configuration: the JSON schema describing a map and the
//! experiments to run on it.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use phlab_core::{
    CircleMap, IntegerMatrix, Phase, SkewProductMap, SuspensionFlow, ToralDiffeo,
    TrigPerturbation, TrigTerm,
};

pub const SCHEMA_VERSION: u32 = 1;

/// One self-contained experiment plan: a map plus experiment list.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    /// Base seed; every estimator derives its stream from it.
    pub seed: u64,
    pub map: MapSpec,
    pub experiments: Vec<ExperimentSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    /// `f(x) = A x + s·p(x) mod ℤⁿ`
    Toral {
        matrix: Vec<Vec<i64>>,
        #[serde(default)]
        perturbation: Option<PerturbationSpec>,
    },
    /// Skew product of the suspension flow of `base` over the circle map
    /// `y + c(sin 2πy − sin² 2πy) + eps`.
    SkewSuspension {
        base: Vec<Vec<i64>>,
        c: f64,
        eps: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PerturbationSpec {
    pub amplitude: f64,
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermSpec {
    pub coeff: Vec<f64>,
    pub freq: Vec<i64>,
    /// "sin" or "cos"
    pub phase: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentSpec {
    /// Induced homology action, spectrum, growth, carried class.
    Homology { degree: usize },
    /// Unstable (and stable) leaf volume growth.
    VolumeGrowth {
        degree: usize,
        radius: f64,
        n_max: usize,
        max_edge: f64,
        #[serde(default = "default_base_points")]
        base_points: usize,
        #[serde(default)]
        radii: Vec<f64>,
        #[serde(default = "default_true")]
        stable_side: bool,
    },
    /// Separated-set topological entropy. The sample is a phase-space grid
    /// unless `leaf` is given, in which case points are drawn on an
    /// unstable leaf patch (needed when uniform grids cannot resolve the
    /// expansion rate at desk scale).
    Entropy {
        eps_ladder: Vec<f64>,
        n_max: usize,
        grid: Vec<usize>,
        #[serde(default)]
        leaf: Option<LeafSampleSpec>,
        #[serde(default = "default_true")]
        inverse_check: bool,
    },
    /// Partition-coded measure entropy.
    MeasureEntropy {
        partition: Vec<usize>,
        orbit_len: usize,
        burn_in: usize,
        m_max: usize,
    },
    /// Lyapunov spectrum and band classification.
    Lyapunov {
        iterates: usize,
        reorth_every: usize,
    },
    /// Current convergence and closedness defects on the unstable leaf.
    Currents {
        radius: f64,
        n_max: usize,
        max_edge: f64,
    },
    /// Jacobian gap criterion min J_k/J_{k−1}.
    JacobianGap {
        degree: usize,
        samples: usize,
    },
    /// Circle fixed points, fiber speeds, and per-fiber entropy and growth
    /// estimates (skew-suspension maps only).
    Fibers {
        leaf_points: usize,
        eps_ladder: Vec<f64>,
        /// iterate budget for slow fibers (speed < 1.3)
        n_max_slow: usize,
        /// iterate budget for fast fibers
        n_max_fast: usize,
        growth_n_max: usize,
    },
    /// Inequality verdicts over everything computed so far.
    Verify,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LeafSampleSpec {
    pub radius: f64,
    pub points: Vec<usize>,
}

fn default_true() -> bool {
    true
}

fn default_base_points() -> usize {
    1
}

/// Built map families, constructed and certified from a `MapSpec`.
pub enum BuiltMap {
    Toral(ToralDiffeo),
    Skew(SkewProductMap),
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text).context("parsing scenario JSON")?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            );
        }
        if self.name.is_empty() {
            bail!("scenario name must be nonempty");
        }
        self.build_map()?;
        for e in &self.experiments {
            match e {
                ExperimentSpec::Homology { degree } => {
                    if *degree == 0 {
                        bail!("homology degree must be at least 1");
                    }
                }
                ExperimentSpec::VolumeGrowth {
                    degree,
                    radius,
                    n_max,
                    max_edge,
                    ..
                } => {
                    if !(*degree == 1 || *degree == 2) {
                        bail!("volume growth supports degree 1 or 2");
                    }
                    if !(*radius > 0.0 && *radius <= 0.25) {
                        bail!("volume growth radius must be in (0, 0.25]");
                    }
                    if *n_max < 6 {
                        bail!("volume growth needs n_max at least 6");
                    }
                    if !(*max_edge > 0.0 && *max_edge <= 0.25) {
                        bail!("max_edge must be in (0, 0.25]");
                    }
                }
                ExperimentSpec::Entropy {
                    eps_ladder,
                    n_max,
                    grid,
                    leaf,
                    ..
                } => {
                    if eps_ladder.is_empty() || eps_ladder.windows(2).any(|w| w[0] <= w[1]) {
                        bail!("eps_ladder must be nonempty and strictly decreasing");
                    }
                    if eps_ladder.iter().any(|&e| !(e > 0.0 && e < 0.5)) {
                        bail!("eps values must lie in (0, 0.5)");
                    }
                    if *n_max < 2 || *n_max > 64 {
                        bail!("entropy n_max must lie in [2, 64]");
                    }
                    if grid.is_empty() || grid.iter().any(|&g| g < 2 || g > 4096) {
                        bail!("entropy grid resolutions must lie in [2, 4096]");
                    }
                    if let Some(l) = leaf {
                        if !(l.radius > 0.0 && l.radius <= 0.25) {
                            bail!("leaf radius must be in (0, 0.25]");
                        }
                        if l.points.is_empty()
                            || l.points.len() > 2
                            || l.points.iter().product::<usize>() > 2_000_000
                        {
                            bail!("leaf sample must have 1-2 axes and at most 2·10^6 points");
                        }
                    }
                }
                ExperimentSpec::MeasureEntropy {
                    partition,
                    orbit_len,
                    burn_in: _,
                    m_max,
                } => {
                    if partition.is_empty() || partition.iter().any(|&g| g < 2 || g > 1024) {
                        bail!("partition resolutions must lie in [2, 1024]");
                    }
                    if *orbit_len < 10_000 {
                        bail!("measure entropy orbit must have at least 10^4 steps");
                    }
                    if *m_max < 2 || *m_max > 8 {
                        bail!("measure entropy m_max must lie in [2, 8]");
                    }
                }
                ExperimentSpec::Lyapunov {
                    iterates,
                    reorth_every,
                } => {
                    if *iterates < 1_000 {
                        bail!("lyapunov needs at least 10^3 iterates");
                    }
                    if *reorth_every == 0 || *reorth_every > 32 {
                        bail!("reorth_every must lie in [1, 32]");
                    }
                }
                ExperimentSpec::Currents {
                    radius,
                    n_max,
                    max_edge,
                } => {
                    if !(*radius > 0.0 && *radius <= 0.25) {
                        bail!("currents radius must be in (0, 0.25]");
                    }
                    if *n_max < 6 || *n_max > 20 {
                        bail!("currents n_max must lie in [6, 20]");
                    }
                    if !(*max_edge > 0.0 && *max_edge <= 0.25) {
                        bail!("max_edge must be in (0, 0.25]");
                    }
                }
                ExperimentSpec::JacobianGap { degree, samples } => {
                    if *degree == 0 || *samples == 0 {
                        bail!("jacobian gap needs degree ≥ 1 and at least one sample");
                    }
                }
                ExperimentSpec::Fibers {
                    leaf_points,
                    eps_ladder,
                    n_max_slow,
                    n_max_fast,
                    growth_n_max,
                } => {
                    if *leaf_points < 1_000 || *leaf_points > 2_000_000 {
                        bail!("fiber leaf sample must have 10^3..2·10^6 points");
                    }
                    if eps_ladder.is_empty() || eps_ladder.windows(2).any(|w| w[0] <= w[1]) {
                        bail!("eps_ladder must be nonempty and strictly decreasing");
                    }
                    if *n_max_slow < 3 || *n_max_fast < 3 || *growth_n_max < 6 {
                        bail!("fiber iterate budgets too small");
                    }
                    if !matches!(self.map, MapSpec::SkewSuspension { .. }) {
                        bail!("fiber experiments only apply to skew-suspension maps");
                    }
                }
                ExperimentSpec::Verify => {}
            }
        }
        Ok(())
    }

    /// Constructs and certifies the map (diffeomorphism bounds, circle-map
    /// shape, hyperbolicity of the suspension base).
    pub fn build_map(&self) -> Result<BuiltMap> {
        match &self.map {
            MapSpec::Toral {
                matrix,
                perturbation,
            } => {
                let a = parse_matrix(matrix)?;
                let p = match perturbation {
                    None => TrigPerturbation::zero(),
                    Some(spec) => {
                        if spec.amplitude < 0.0 {
                            bail!("perturbation amplitude must be nonnegative");
                        }
                        let terms = spec
                            .terms
                            .iter()
                            .map(|t| {
                                if t.coeff.len() != a.dim() || t.freq.len() != a.dim() {
                                    bail!("perturbation term dimensions must match the matrix");
                                }
                                let phase = match t.phase.as_str() {
                                    "sin" => Phase::Sin,
                                    "cos" => Phase::Cos,
                                    other => bail!("unknown phase {other:?} (use sin or cos)"),
                                };
                                Ok(TrigTerm::new(t.coeff.clone(), t.freq.clone(), phase))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        TrigPerturbation::new(terms, spec.amplitude)
                    }
                };
                let f = ToralDiffeo::new(a, p).map_err(|e| anyhow!("{e}"))?;
                Ok(BuiltMap::Toral(f))
            }
            MapSpec::SkewSuspension { base, c, eps } => {
                let a = parse_matrix(base)?;
                let flow = SuspensionFlow::new(a).map_err(|e| anyhow!("{e}"))?;
                let circle = CircleMap::new(*c, *eps).map_err(|e| anyhow!("{e}"))?;
                Ok(BuiltMap::Skew(SkewProductMap::new(flow, circle)))
            }
        }
    }
}

pub fn parse_matrix(rows: &[Vec<i64>]) -> Result<IntegerMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        bail!("matrix must be square and nonempty");
    }
    let entries: Vec<i64> = rows.iter().flatten().copied().collect();
    IntegerMatrix::new(n, entries).map_err(|e| anyhow!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(name: &str) -> Scenario {
        Scenario {
            schema_version: SCHEMA_VERSION,
            name: name.into(),
            seed: 7,
            map: MapSpec::Toral {
                matrix: vec![vec![2, 1], vec![1, 1]],
                perturbation: None,
            },
            experiments: vec![ExperimentSpec::Homology { degree: 1 }],
        }
    }

    #[test]
    fn json_round_trip_preserves_scenario() {
        let s = minimal("round-trip");
        let back = Scenario::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn schema_version_is_enforced() {
        let mut s = minimal("versioned");
        s.schema_version = 99;
        assert!(Scenario::from_json(&s.to_json()).is_err());
    }

    #[test]
    fn non_unimodular_matrix_is_rejected() {
        let mut s = minimal("bad-matrix");
        s.map = MapSpec::Toral {
            matrix: vec![vec![2, 0], vec![0, 2]],
            perturbation: None,
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        let mut s = minimal("bad-entropy");
        s.experiments = vec![ExperimentSpec::Entropy {
            eps_ladder: vec![0.1, 0.2],
            n_max: 6,
            grid: vec![64, 64],
            leaf: None,
            inverse_check: false,
        }];
        assert!(s.validate().is_err(), "increasing ladder must fail");

        let mut s2 = minimal("bad-growth");
        s2.experiments = vec![ExperimentSpec::VolumeGrowth {
            degree: 1,
            radius: 0.1,
            n_max: 4,
            max_edge: 0.02,
            base_points: 1,
            radii: vec![],
            stable_side: true,
        }];
        assert!(s2.validate().is_err(), "n_max below 6 must fail");
    }
}
