//! Hyperparameter sets for the four priors and the default parameterisations
//! used in the simulation study.

use crate::error::{Error, Result};
use crate::specialfns::log_gamma;
use serde::{Deserialize, Serialize};

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

/// R2-D2 hyperparameters: `R^2 ~ Beta(a, b)`, `phi ~ Dir(a_pi, ..., a_pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct R2d2Params {
    pub a: f64,
    pub b: f64,
    pub a_pi: f64,
}

impl R2d2Params {
    pub fn new(a: f64, b: f64, a_pi: f64) -> Result<Self> {
        positive("R2-D2 a", a)?;
        positive("R2-D2 b", b)?;
        positive("R2-D2 a_pi", a_pi)?;
        Ok(R2d2Params { a, b, a_pi })
    }

    /// The reduced form `a = p * a_pi`, under which `phi_j * omega` are
    /// independent `Ga(a_pi, xi)` variables.
    pub fn reduced(p: usize, b: f64, a_pi: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Config("p must be at least 1".into()));
        }
        R2d2Params::new(p as f64 * a_pi, b, a_pi)
    }

    pub fn is_reduced(&self, p: usize) -> bool {
        let want = p as f64 * self.a_pi;
        (self.a - want).abs() <= 1e-12 * want.max(self.a)
    }

    /// Marginal density unbounded at the origin.
    pub fn origin_unbounded(&self) -> bool {
        self.a_pi < 0.5
    }

    /// Polynomial tail heavier than the Cauchy.
    pub fn heavier_than_cauchy(&self) -> bool {
        self.b < 0.5
    }

    /// `E|beta_j|^s` under the reduced hierarchy with `sigma = 1`, finite for
    /// `0 < s < 2b`:
    /// `Gamma(s+1) Gamma(a_pi + s/2) Gamma(b - s/2) / (2^(s/2) Gamma(a_pi) Gamma(b))`.
    pub fn abs_moment(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < 2.0 * self.b) {
            return Err(Error::domain(format!(
                "E|beta|^{s} is finite only for 0 < s < 2b = {}",
                2.0 * self.b
            )));
        }
        // Laplace with scale d: E|x|^s = Gamma(s+1) d^s; d^2 = lambda/2,
        // lambda ~ BP(a_pi, b): E lambda^(s/2) = B(a_pi + s/2, b - s/2)/B(a_pi, b).
        let lg = log_gamma(s + 1.0)? - 0.5 * s * std::f64::consts::LN_2 + log_gamma(self.a_pi + 0.5 * s)?
            + log_gamma(self.b - 0.5 * s)?
            - log_gamma(self.a_pi)?
            - log_gamma(self.b)?;
        Ok(lg.exp())
    }
}

/// Which of the simulation-study R2-D2 parameterisations to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum R2d2Variant {
    /// `a = 0.5, b = 0.5, a_pi = 1/(2p)`
    Half,
    /// `a = p/n, b = 0.5, a_pi = 1/n`
    POverNB05,
    /// `a = p/n, b = 0.1, a_pi = 1/n`
    POverNB01,
    /// `a = 1, b = 1, a_pi = 1/p`
    Unit,
}

impl R2d2Variant {
    pub const ALL: [R2d2Variant; 4] = [
        R2d2Variant::Half,
        R2d2Variant::POverNB05,
        R2d2Variant::POverNB01,
        R2d2Variant::Unit,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            R2d2Variant::Half => "R2-D2(0.5,0.5)",
            R2d2Variant::POverNB05 => "R2-D2(p/n,0.5)",
            R2d2Variant::POverNB01 => "R2-D2(p/n,0.1)",
            R2d2Variant::Unit => "R2-D2(1,1)",
        }
    }
}

pub fn default_r2d2(p: usize, n: usize, variant: R2d2Variant) -> R2d2Params {
    let (p, n) = (p.max(1), n.max(1));
    let (b, a_pi) = match variant {
        R2d2Variant::Half => (0.5, 1.0 / (2.0 * p as f64)),
        R2d2Variant::POverNB05 => (0.5, 1.0 / n as f64),
        R2d2Variant::POverNB01 => (0.1, 1.0 / n as f64),
        R2d2Variant::Unit => (1.0, 1.0 / p as f64),
    };
    // a is written out rather than formed as p * a_pi so the documented
    // values (0.5, p/n, 1) hold exactly
    let a = match variant {
        R2d2Variant::Half => 0.5,
        R2d2Variant::POverNB05 | R2d2Variant::POverNB01 => p as f64 / n as f64,
        R2d2Variant::Unit => 1.0,
    };
    R2d2Params { a, b, a_pi }
}

/// Outcome of [`implied_r2_prior`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImpliedR2 {
    pub a: f64,
    pub b: f64,
    /// False when `a != p * a_pi`: the full Dirichlet construction is in
    /// force, under which `R^2 ~ Beta(a, b)` still holds but the per-coordinate
    /// reduction does not.
    pub reduced: bool,
}

/// `R^2 = W / (W + 1)` with `W ~ BP(a, b)` is `Beta(a, b)`.
pub fn implied_r2_prior(params: &R2d2Params, p: usize) -> ImpliedR2 {
    ImpliedR2 {
        a: params.a,
        b: params.b,
        reduced: params.is_reduced(p),
    }
}

pub fn r2_from_w(w: f64) -> f64 {
    w / (w + 1.0)
}

/// Dirichlet-Laplace: `beta_j | psi_j ~ DE(psi_j)`, `psi_j ~ Ga(a_D, 1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DlParams {
    pub a_d: f64,
}

impl DlParams {
    pub fn new(a_d: f64) -> Result<Self> {
        positive("DL a_D", a_d)?;
        Ok(DlParams { a_d })
    }

    pub fn origin_unbounded(&self) -> bool {
        self.a_d < 1.0
    }
}

/// Treatment of the Horseshoe global scale inside the sampler.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalScale {
    /// `tau ~ C+(0, scale)`, learned.
    #[default]
    HalfCauchy,
    /// `tau = scale`, held fixed.
    Fixed,
}

/// Horseshoe: `beta_j | lambda_j ~ N(0, sigma^2 lambda_j^2)`,
/// `lambda_j | tau ~ C+(0, tau)`.
///
/// For marginal densities `tau` is the (fixed) global scale; in the sampler it
/// is the half-Cauchy scale of `tau` unless `global` is [`GlobalScale::Fixed`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsParams {
    pub tau: f64,
    #[serde(default)]
    pub global: GlobalScale,
}

impl Default for HsParams {
    fn default() -> Self {
        HsParams {
            tau: 1.0,
            global: GlobalScale::HalfCauchy,
        }
    }
}

impl HsParams {
    pub fn new(tau: f64) -> Result<Self> {
        positive("Horseshoe tau", tau)?;
        Ok(HsParams {
            tau,
            global: GlobalScale::HalfCauchy,
        })
    }

    pub fn fixed(tau: f64) -> Result<Self> {
        positive("Horseshoe tau", tau)?;
        Ok(HsParams {
            tau,
            global: GlobalScale::Fixed,
        })
    }
}

/// Horseshoe+: adds `lambda_j | tau, eta_j ~ C+(0, tau eta_j)`, `eta_j ~ C+(0, 1)`.
pub type HsPlusParams = HsParams;

/// `sigma^2 ~ IG(a1, b1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaPrior {
    pub a1: f64,
    pub b1: f64,
}

impl Default for SigmaPrior {
    fn default() -> Self {
        SigmaPrior { a1: 0.001, b1: 0.001 }
    }
}

impl SigmaPrior {
    pub fn new(a1: f64, b1: f64) -> Result<Self> {
        positive("sigma^2 prior a1", a1)?;
        positive("sigma^2 prior b1", b1)?;
        Ok(SigmaPrior { a1, b1 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "prior", rename_all = "snake_case")]
pub enum PriorSpec {
    R2d2(R2d2Params),
    Dl(DlParams),
    Hs(HsParams),
    HsPlus(HsPlusParams),
}

impl PriorSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PriorSpec::R2d2(p) => R2d2Params::new(p.a, p.b, p.a_pi).map(|_| ()),
            PriorSpec::Dl(p) => DlParams::new(p.a_d).map(|_| ()),
            PriorSpec::Hs(p) | PriorSpec::HsPlus(p) => HsParams::new(p.tau).map(|_| ()),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            PriorSpec::R2d2(_) => "r2d2",
            PriorSpec::Dl(_) => "dl",
            PriorSpec::Hs(_) => "hs",
            PriorSpec::HsPlus(_) => "hs+",
        }
    }

    pub fn label(&self) -> String {
        match self {
            PriorSpec::R2d2(p) => format!("r2d2(a={},b={},a_pi={})", p.a, p.b, p.a_pi),
            PriorSpec::Dl(p) => format!("dl(a_D={})", p.a_d),
            PriorSpec::Hs(p) => format!("hs(tau={})", p.tau),
            PriorSpec::HsPlus(p) => format!("hs+(tau={})", p.tau),
        }
    }
}

/// Dimension-dependent DL choices from the simulation study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DlVariant {
    OneOverP,
    TwoOverN,
    OneOverN,
}

impl DlVariant {
    pub fn label(&self) -> &'static str {
        match self {
            DlVariant::OneOverP => "DL(1/p)",
            DlVariant::TwoOverN => "DL(2/n)",
            DlVariant::OneOverN => "DL(1/n)",
        }
    }

    pub fn a_d(&self, p: usize, n: usize) -> f64 {
        match self {
            DlVariant::OneOverP => 1.0 / p.max(1) as f64,
            DlVariant::TwoOverN => 2.0 / n.max(1) as f64,
            DlVariant::OneOverN => 1.0 / n.max(1) as f64,
        }
    }
}

/// A prior whose hyperparameters may depend on `(p, n)`, resolved per dataset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorRecipe {
    R2d2 { variant: R2d2Variant },
    Dl { variant: DlVariant },
    Hs,
    HsPlus,
    Fixed { spec: PriorSpec },
}

impl PriorRecipe {
    pub fn resolve(&self, p: usize, n: usize) -> PriorSpec {
        match *self {
            PriorRecipe::R2d2 { variant } => PriorSpec::R2d2(default_r2d2(p, n, variant)),
            PriorRecipe::Dl { variant } => PriorSpec::Dl(DlParams {
                a_d: variant.a_d(p, n),
            }),
            PriorRecipe::Hs => PriorSpec::Hs(HsParams::default()),
            PriorRecipe::HsPlus => PriorSpec::HsPlus(HsParams::default()),
            PriorRecipe::Fixed { spec } => spec,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PriorRecipe::R2d2 { variant } => variant.label().to_string(),
            PriorRecipe::Dl { variant } => variant.label().to_string(),
            PriorRecipe::Hs => "Horseshoe".to_string(),
            PriorRecipe::HsPlus => "Horseshoe+".to_string(),
            PriorRecipe::Fixed { spec } => spec.label(),
        }
    }

    /// The seven priors of the simulation study.
    /// The simulation set without `DL_{2/n}`.
    pub fn prediction_set() -> Vec<PriorRecipe> {
        Self::simulation_set()
            .into_iter()
            .filter(|r| *r != PriorRecipe::Dl { variant: DlVariant::TwoOverN })
            .collect()
    }

    pub fn simulation_set() -> Vec<PriorRecipe> {
        vec![
            PriorRecipe::Hs,
            PriorRecipe::HsPlus,
            PriorRecipe::R2d2 {
                variant: R2d2Variant::Half,
            },
            PriorRecipe::R2d2 {
                variant: R2d2Variant::POverNB05,
            },
            PriorRecipe::R2d2 {
                variant: R2d2Variant::POverNB01,
            },
            PriorRecipe::R2d2 {
                variant: R2d2Variant::Unit,
            },
            PriorRecipe::Dl {
                variant: DlVariant::OneOverP,
            },
            PriorRecipe::Dl {
                variant: DlVariant::TwoOverN,
            },
            PriorRecipe::Dl {
                variant: DlVariant::OneOverN,
            },
        ]
    }
}
