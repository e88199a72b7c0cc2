//! Registry of 19 classical continuous test functions (TF1 through TF19),
//! all posed as minimization. TF1 to TF13 scale to any dimension and default
//! to 30; TF14 to TF19 have fixed dimensions. Each entry documents its search
//! box, an optimum location, and the objective value there.
//!
//! TF7 adds a fresh uniform draw from `[0, 1)` to every evaluation; its
//! documented optimum value refers to the deterministic part alone.

use crate::problem::{ObjectiveProblem, RealObjective, Sense};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_traits::Float;

use core::f64::consts::{E, PI};

/// Search box description.
#[derive(Clone, Copy, Debug)]
pub enum BoundsSpec {
    /// Same interval for every coordinate.
    Uniform(f64, f64),
    /// Explicit per-coordinate intervals; fixes the dimension.
    PerDim(&'static [(f64, f64)]),
}

/// Optimum location description.
#[derive(Clone, Copy, Debug)]
enum OptimumPoint {
    /// The same value in every coordinate.
    Repeat(f64),
    Fixed(&'static [f64]),
}

/// Optimum value description.
#[derive(Clone, Copy, Debug)]
enum OptimumValue {
    Constant(f64),
    /// Value contributed by each coordinate; total scales with dimension.
    PerDimension(f64),
}

/// One registry function.
pub struct BenchmarkEntry {
    pub id: &'static str,
    pub name: &'static str,
    pub scalable: bool,
    pub default_dim: usize,
    pub noisy: bool,
    bounds: BoundsSpec,
    core: fn(&[f64]) -> f64,
    optimum: OptimumPoint,
    optimum_value: OptimumValue,
}

/// Registry lookup and construction failures.
#[derive(Clone, Debug, PartialEq)]
pub enum RegistryError {
    UnknownFunction(String),
    /// A fixed-dimension function was requested at some other dimension.
    FixedDimension {
        id: &'static str,
        expected: usize,
        requested: usize,
    },
    /// Dimension zero is meaningless.
    ZeroDimension,
}

impl fmt::Display for RegistryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegistryError::UnknownFunction(id) => write!(f, "unknown function {id:?}"),
            RegistryError::FixedDimension {
                id,
                expected,
                requested,
            } => write!(f, "{id} is fixed at dimension {expected}, not {requested}"),
            RegistryError::ZeroDimension => f.write_str("dimension must be at least 1"),
        }
    }
}

impl BenchmarkEntry {
    /// Resolves a requested dimension: `None` means the default; fixed-
    /// dimension functions accept only their own dimension.
    pub fn dimension_for(&self, requested: Option<usize>) -> Result<usize, RegistryError> {
        match requested {
            None => Ok(self.default_dim),
            Some(0) => Err(RegistryError::ZeroDimension),
            Some(d) if self.scalable || d == self.default_dim => Ok(d),
            Some(d) => Err(RegistryError::FixedDimension {
                id: self.id,
                expected: self.default_dim,
                requested: d,
            }),
        }
    }

    /// Per-coordinate search intervals at dimension `dim`.
    pub fn bounds_for(&self, dim: usize) -> Vec<(f64, f64)> {
        match self.bounds {
            BoundsSpec::Uniform(lo, hi) => alloc::vec![(lo, hi); dim],
            BoundsSpec::PerDim(b) => b.to_vec(),
        }
    }

    /// Documented optimum location at dimension `dim`.
    pub fn optimum_point(&self, dim: usize) -> Vec<f64> {
        match self.optimum {
            OptimumPoint::Repeat(v) => alloc::vec![v; dim],
            OptimumPoint::Fixed(p) => p.to_vec(),
        }
    }

    /// Documented optimum value at dimension `dim`. For TF7 this refers to
    /// the deterministic part, excluding the additive noise.
    pub fn known_optimum(&self, dim: usize) -> f64 {
        match self.optimum_value {
            OptimumValue::Constant(v) => v,
            OptimumValue::PerDimension(per) => per * dim as f64,
        }
    }

    /// Deterministic objective value at `x`, excluding any noise term.
    pub fn core_value(&self, x: &[f64]) -> f64 {
        (self.core)(x)
    }

    /// Builds the minimization problem at dimension `dim`.
    pub fn build(&self, dim: usize) -> Result<ObjectiveProblem, RegistryError> {
        let dim = self.dimension_for(Some(dim))?;
        let objective = if self.noisy {
            RealObjective::Seeded(quartic_noisy)
        } else {
            RealObjective::Pure(self.core)
        };
        Ok(
            ObjectiveProblem::real(self.id, self.bounds_for(dim), Sense::Minimize, objective)
                .expect("registry bounds are valid"),
        )
    }
}

/// The full registry, in id order.
pub fn registry() -> &'static [BenchmarkEntry] {
    &REGISTRY
}

/// Case-insensitive lookup by id.
pub fn find(id: &str) -> Result<&'static BenchmarkEntry, RegistryError> {
    REGISTRY
        .iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| RegistryError::UnknownFunction(String::from(id)))
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn abs_sum_plus_product(x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| Float::abs(*v)).sum();
    let p: f64 = x.iter().map(|v| Float::abs(*v)).product();
    s + p
}

fn cumulative_sum_squares(x: &[f64]) -> f64 {
    let mut run = 0.0;
    let mut total = 0.0;
    for v in x {
        run += v;
        total += run * run;
    }
    total
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().map(|v| Float::abs(*v)).fold(0.0, f64::max)
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            100.0 * (b - a * a) * (b - a * a) + (a - 1.0) * (a - 1.0)
        })
        .sum()
}

fn rounded_sphere(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| {
            let r = Float::floor(v + 0.5);
            r * r
        })
        .sum()
}

fn weighted_quartic(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (i + 1) as f64 * Float::powi(*v, 4))
        .sum()
}

fn quartic_noisy(x: &[f64], rng: &mut crate::rng::SeededRng) -> f64 {
    weighted_quartic(x) + rng.next_f64()
}

fn sine_root_sum(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| -v * Float::sin(Float::sqrt(Float::abs(*v))))
        .sum()
}

fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * Float::cos(2.0 * PI * v) + 10.0)
        .sum()
}

fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let sum_cos: f64 = x.iter().map(|v| Float::cos(2.0 * PI * v)).sum();
    -20.0 * Float::exp(-0.2 * Float::sqrt(sum_sq / d)) - Float::exp(sum_cos / d) + 20.0 + E
}

fn griewank(x: &[f64]) -> f64 {
    let s: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let p: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| Float::cos(v / Float::sqrt((i + 1) as f64)))
        .product();
    s - p + 1.0
}

/// Boundary penalty shared by the two penalized functions.
fn penalty(v: f64, a: f64, k: f64) -> f64 {
    if v > a {
        k * Float::powi(v - a, 4)
    } else if v < -a {
        k * Float::powi(-v - a, 4)
    } else {
        0.0
    }
}

fn penalized_sine(x: &[f64]) -> f64 {
    let d = x.len();
    let y = |v: f64| 1.0 + (v + 1.0) / 4.0;
    let sin2 = |v: f64| {
        let s = Float::sin(v);
        s * s
    };
    let mut s = 10.0 * sin2(PI * y(x[0]));
    for i in 0..d - 1 {
        let yi = y(x[i]);
        s += (yi - 1.0) * (yi - 1.0) * (1.0 + 10.0 * sin2(PI * y(x[i + 1])));
    }
    let yd = y(x[d - 1]);
    s += (yd - 1.0) * (yd - 1.0);
    s *= PI / d as f64;
    s + x.iter().map(|&v| penalty(v, 10.0, 100.0)).sum::<f64>()
}

fn penalized_sine_levy(x: &[f64]) -> f64 {
    let d = x.len();
    let sin2 = |v: f64| {
        let s = Float::sin(v);
        s * s
    };
    let mut s = sin2(3.0 * PI * x[0]);
    for i in 0..d - 1 {
        s += (x[i] - 1.0) * (x[i] - 1.0) * (1.0 + sin2(3.0 * PI * x[i + 1]));
    }
    s += (x[d - 1] - 1.0) * (x[d - 1] - 1.0) * (1.0 + sin2(2.0 * PI * x[d - 1]));
    s *= 0.1;
    s + x.iter().map(|&v| penalty(v, 5.0, 100.0)).sum::<f64>()
}

const FOX_OFFSETS: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];

fn foxholes(x: &[f64]) -> f64 {
    let mut s = 1.0 / 500.0;
    for j in 0..25 {
        let a1 = FOX_OFFSETS[j % 5];
        let a2 = FOX_OFFSETS[j / 5];
        s += 1.0
            / ((j + 1) as f64 + Float::powi(x[0] - a1, 6) + Float::powi(x[1] - a2, 6));
    }
    1.0 / s
}

const KOW_A: [f64; 11] = [
    0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
];
const KOW_B: [f64; 11] = [
    4.0,
    2.0,
    1.0,
    0.5,
    0.25,
    1.0 / 6.0,
    0.125,
    0.1,
    1.0 / 12.0,
    1.0 / 14.0,
    0.0625,
];

fn kowalik(x: &[f64]) -> f64 {
    KOW_A
        .iter()
        .zip(&KOW_B)
        .map(|(&a, &b)| {
            let r = a - x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]);
            r * r
        })
        .sum()
}

fn six_hump_camel(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    4.0 * x1 * x1 - 2.1 * Float::powi(x1, 4) + Float::powi(x1, 6) / 3.0 + x1 * x2
        - 4.0 * x2 * x2
        + 4.0 * Float::powi(x2, 4)
}

fn branin(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    let a = x2 - 5.1 * x1 * x1 / (4.0 * PI * PI) + 5.0 * x1 / PI - 6.0;
    a * a + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * Float::cos(x1) + 10.0
}

fn goldstein_price(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    let a = 1.0
        + Float::powi(x1 + x2 + 1.0, 2)
            * (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2);
    let b = 30.0
        + Float::powi(2.0 * x1 - 3.0 * x2, 2)
            * (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2);
    a * b
}

const H3_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const H3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const H3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];

fn hartmann3(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        let inner: f64 = (0..3)
            .map(|j| H3_A[i][j] * Float::powi(x[j] - H3_P[i][j], 2))
            .sum();
        s -= H3_ALPHA[i] * Float::exp(-inner);
    }
    s
}

const BRANIN_BOUNDS: [(f64, f64); 2] = [(-5.0, 10.0), (0.0, 15.0)];

const FOXHOLES_OPT: [f64; 2] = [-31.97833478, -31.9783323];
const KOWALIK_OPT: [f64; 4] = [0.192833453, 0.190836247, 0.123117301, 0.135765993];
const CAMEL_OPT: [f64; 2] = [0.0898420065, -0.7126563984];
const BRANIN_OPT: [f64; 2] = [PI, 2.275];
const GOLDSTEIN_OPT: [f64; 2] = [0.0, -1.0];
const HARTMANN3_OPT: [f64; 3] = [0.114588879, 0.555648895, 0.852546986];

static REGISTRY: [BenchmarkEntry; 19] = [
    BenchmarkEntry {
        id: "TF1",
        name: "sphere",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-100.0, 100.0),
        core: sphere,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF2",
        name: "abs-sum-plus-product",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-10.0, 10.0),
        core: abs_sum_plus_product,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF3",
        name: "cumulative-sum-squares",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-100.0, 100.0),
        core: cumulative_sum_squares,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF4",
        name: "max-abs",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-100.0, 100.0),
        core: max_abs,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF5",
        name: "rosenbrock",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-30.0, 30.0),
        core: rosenbrock,
        optimum: OptimumPoint::Repeat(1.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF6",
        name: "rounded-sphere",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-100.0, 100.0),
        core: rounded_sphere,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF7",
        name: "weighted-quartic-noisy",
        scalable: true,
        default_dim: 30,
        noisy: true,
        bounds: BoundsSpec::Uniform(-1.28, 1.28),
        core: weighted_quartic,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF8",
        name: "sine-root-sum",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-500.0, 500.0),
        core: sine_root_sum,
        optimum: OptimumPoint::Repeat(420.968746314),
        optimum_value: OptimumValue::PerDimension(-418.98288727243374),
    },
    BenchmarkEntry {
        id: "TF9",
        name: "rastrigin",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-5.12, 5.12),
        core: rastrigin,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF10",
        name: "ackley",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-32.0, 32.0),
        core: ackley,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF11",
        name: "griewank",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-600.0, 600.0),
        core: griewank,
        optimum: OptimumPoint::Repeat(0.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF12",
        name: "penalized-sine",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-50.0, 50.0),
        core: penalized_sine,
        optimum: OptimumPoint::Repeat(-1.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF13",
        name: "penalized-levy",
        scalable: true,
        default_dim: 30,
        noisy: false,
        bounds: BoundsSpec::Uniform(-50.0, 50.0),
        core: penalized_sine_levy,
        optimum: OptimumPoint::Repeat(1.0),
        optimum_value: OptimumValue::Constant(0.0),
    },
    BenchmarkEntry {
        id: "TF14",
        name: "foxholes",
        scalable: false,
        default_dim: 2,
        noisy: false,
        bounds: BoundsSpec::Uniform(-65.536, 65.536),
        core: foxholes,
        optimum: OptimumPoint::Fixed(&FOXHOLES_OPT),
        optimum_value: OptimumValue::Constant(0.99800383779445),
    },
    BenchmarkEntry {
        id: "TF15",
        name: "kowalik",
        scalable: false,
        default_dim: 4,
        noisy: false,
        bounds: BoundsSpec::Uniform(-5.0, 5.0),
        core: kowalik,
        optimum: OptimumPoint::Fixed(&KOWALIK_OPT),
        optimum_value: OptimumValue::Constant(0.0003074859878056071),
    },
    BenchmarkEntry {
        id: "TF16",
        name: "six-hump-camel",
        scalable: false,
        default_dim: 2,
        noisy: false,
        bounds: BoundsSpec::Uniform(-5.0, 5.0),
        core: six_hump_camel,
        optimum: OptimumPoint::Fixed(&CAMEL_OPT),
        optimum_value: OptimumValue::Constant(-1.0316284534898772),
    },
    BenchmarkEntry {
        id: "TF17",
        name: "branin",
        scalable: false,
        default_dim: 2,
        noisy: false,
        bounds: BoundsSpec::PerDim(&BRANIN_BOUNDS),
        core: branin,
        optimum: OptimumPoint::Fixed(&BRANIN_OPT),
        optimum_value: OptimumValue::Constant(0.39788735772973816),
    },
    BenchmarkEntry {
        id: "TF18",
        name: "goldstein-price",
        scalable: false,
        default_dim: 2,
        noisy: false,
        bounds: BoundsSpec::Uniform(-2.0, 2.0),
        core: goldstein_price,
        optimum: OptimumPoint::Fixed(&GOLDSTEIN_OPT),
        optimum_value: OptimumValue::Constant(3.0),
    },
    BenchmarkEntry {
        id: "TF19",
        name: "hartmann-3",
        scalable: false,
        default_dim: 3,
        noisy: false,
        bounds: BoundsSpec::Uniform(0.0, 1.0),
        core: hartmann3,
        optimum: OptimumPoint::Fixed(&HARTMANN3_OPT),
        optimum_value: OptimumValue::Constant(-3.8627797873326624),
    },
];
