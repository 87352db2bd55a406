//! Deterministic test families: Klee-Minty cubes, classical degenerate
//! (cycling) LPs, and seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{GeneralLp, LpBuilder, Names};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("{family}: size {d} outside {min}..={max}")]
    SizeOutOfRange { family: &'static str, d: usize, min: usize, max: usize },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

/// Largest variant-1 size whose right-hand side `5^d` is an exact double.
pub const KLEE_MINTY_V1_MAX: usize = 22;
pub const KLEE_MINTY_V2_MAX: usize = 30;

fn check_size(family: &'static str, d: usize, max: usize) -> Result<(), GeneratorError> {
    if (2..=max).contains(&d) {
        Ok(())
    } else {
        Err(GeneratorError::SizeOutOfRange { family, d, min: 2, max })
    }
}

/// `min -Σ 2^(d-i) x_i` s.t. `Σ_{j<i} 2^(i-j+1) x_j + x_i <= 5^i`, `x >= 0`.
///
/// Optimum `(0, …, 0, 5^d)` with value `-5^d`.
pub fn klee_minty_v1<T: Scalar>(d: usize) -> Result<GeneralLp<T>, GeneratorError> {
    check_size("klee-minty-1", d, KLEE_MINTY_V1_MAX)?;
    let c = (0..d).map(|i| -T::lit(2f64.powi((d - 1 - i) as i32))).collect();
    let mut b = LpBuilder::new(d).objective(c);
    for i in 0..d {
        let mut row = vec![T::zero(); d];
        for (j, v) in row.iter_mut().enumerate().take(i) {
            *v = T::lit(2f64.powi((i - j + 1) as i32));
        }
        row[i] = T::one();
        b = b.le(row, T::lit(5f64.powi(i as i32 + 1)));
    }
    Ok(b.build().expect("klee-minty data is well formed"))
}

/// `min -Σ x_i` s.t. `x_1 <= 1`, `2 Σ_{i<k} x_i + x_k <= 2^k - 1`, `x >= 0`.
///
/// Optimum `(0, …, 0, 2^d - 1)` with value `-(2^d - 1)`.
pub fn klee_minty_v2<T: Scalar>(d: usize) -> Result<GeneralLp<T>, GeneratorError> {
    check_size("klee-minty-2", d, KLEE_MINTY_V2_MAX)?;
    let mut b = LpBuilder::new(d).objective(vec![-T::one(); d]);
    for k in 0..d {
        let mut row = vec![T::lit(2.0); k];
        row.push(T::one());
        row.resize(d, T::zero());
        b = b.le(row, T::lit(2f64.powi(k as i32 + 1) - 1.0));
    }
    Ok(b.build().expect("klee-minty data is well formed"))
}

/// Names of the bundled degenerate fixtures.
///
/// These are classical examples on which textbook simplex rules cycle. They
/// stand in for larger published cycling collections, which are not bundled.
pub const CYCLING_FIXTURES: &[&str] = &["beale", "beale-variant", "chvatal", "kuhn", "marshall-suurballe"];

struct Fixture {
    c: [f64; 4],
    le_rows: &'static [([f64; 4], f64)],
}

fn fixture_data(id: &str) -> Option<Fixture> {
    let f = match id {
        // Beale (1955).
        "beale" => Fixture {
            c: [-0.75, 150.0, -0.02, 6.0],
            le_rows: &[([0.25, -60.0, -0.04, 9.0], 0.0), ([0.5, -90.0, -0.02, 3.0], 0.0), ([0.0, 0.0, 1.0, 0.0], 1.0)],
        },
        // The rescaled form of Beale's example found in many textbooks.
        "beale-variant" => Fixture {
            c: [-0.75, 20.0, -0.5, 6.0],
            le_rows: &[([0.25, -8.0, -1.0, 9.0], 0.0), ([0.5, -12.0, -0.5, 3.0], 0.0), ([0.0, 0.0, 1.0, 0.0], 1.0)],
        },
        // Chvátal's example; cycles under largest-coefficient entering with
        // smallest-subscript leaving.
        "chvatal" => Fixture {
            c: [-10.0, 57.0, 9.0, 24.0],
            le_rows: &[([0.5, -5.5, -2.5, 9.0], 0.0), ([0.5, -1.5, -0.5, 1.0], 0.0), ([1.0, 0.0, 0.0, 0.0], 1.0)],
        },
        // Kuhn's example.
        "kuhn" => Fixture {
            c: [-2.0, -3.0, 1.0, 12.0],
            le_rows: &[
                ([-2.0, -9.0, 1.0, 9.0], 0.0),
                ([1.0 / 3.0, 1.0, -1.0 / 3.0, -2.0], 0.0),
                ([2.0, 3.0, -1.0, -12.0], 2.0),
            ],
        },
        // Marshall and Suurballe; the cone is normalized by Σx <= 1 so the
        // problem has a finite optimum.
        "marshall-suurballe" => Fixture {
            c: [-2.3, -2.15, 13.55, 0.4],
            le_rows: &[([0.4, 0.2, -1.4, -0.2], 0.0), ([-7.8, -1.4, 7.8, 0.4], 0.0), ([1.0, 1.0, 1.0, 1.0], 1.0)],
        },
        _ => return None,
    };
    Some(f)
}

/// One of the [`CYCLING_FIXTURES`], all variables `>= 0`.
pub fn cycling_fixture<T: Scalar>(id: &str) -> Result<GeneralLp<T>, GeneratorError> {
    let f = fixture_data(id).ok_or_else(|| GeneratorError::UnknownFixture(id.to_string()))?;
    let lit = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
    let mut b = LpBuilder::new(4).objective(lit(&f.c));
    for (row, rhs) in f.le_rows {
        b = b.le(lit(row), T::lit(*rhs));
    }
    let mut lp = b.build().expect("fixture data is well formed");
    lp.names = Some(Names {
        columns: (1..=4).map(|i| format!("x{i}")).collect(),
        eq_rows: vec![],
        ineq_rows: (1..=f.le_rows.len()).map(|i| format!("{id}_r{i}")).collect(),
    });
    Ok(lp)
}

/// How random instances are made.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    /// Every row is satisfied by a planted integer point.
    Planted,
    /// Planted, plus an equality row contradicting a scaled copy of another.
    Infeasible,
    /// Planted, with a recession direction along which the objective decreases.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStyle {
    NonNegative,
    Boxed,
    /// Per variable: boxed, one-sided, or free.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub kind: RandomKind,
    pub bounds: BoundStyle,
}

impl RandomSpec {
    pub fn new(seed: u64, d: usize, m: usize, n: usize) -> Self {
        RandomSpec { seed, d, m, n, kind: RandomKind::Planted, bounds: BoundStyle::Mixed }
    }

    pub fn kind(mut self, kind: RandomKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn bounds(mut self, bounds: BoundStyle) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn build<T: Scalar>(&self) -> GeneralLp<T> {
        random_lp(self).cast()
    }
}

/// Planted-feasible instance with mixed bounds and integer data in `[-9, 9]`.
pub fn random_instance<T: Scalar>(seed: u64, d: usize, m: usize, n: usize) -> GeneralLp<T> {
    RandomSpec::new(seed, d, m, n).build()
}

fn random_lp(spec: &RandomSpec) -> GeneralLp<f64> {
    let RandomSpec { seed, d, m, n, kind, bounds } = *spec;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coef = |rng: &mut ChaCha8Rng| rng.gen_range(-9i32..=9) as f64;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let x_star: Vec<f64> = (0..d).map(|_| rng.gen_range(-3i32..=3) as f64).collect();
    let ray: Vec<f64> = if kind == RandomKind::Unbounded {
        let mut r: Vec<f64> = (0..d).map(|_| rng.gen_range(-1i32..=1) as f64).collect();
        let k = rng.gen_range(0..d);
        r[k] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        r
    } else {
        vec![0.0; d]
    };
    // Coordinate with a unit ray component, used to repair rows and c.
    let pivot = ray.iter().position(|&v| v != 0.0);

    let mut c: Vec<f64> = (0..d).map(|_| coef(&mut rng)).collect();
    let mut b = LpBuilder::new(d);

    for _ in 0..m {
        let mut a: Vec<f64> = (0..d).map(|_| coef(&mut rng)).collect();
        if let Some(k) = pivot {
            // Make a·ray = 0 so the ray stays inside the equality set.
            let rest: f64 = (0..d).filter(|&j| j != k).map(|j| a[j] * ray[j]).sum();
            a[k] = -rest * ray[k];
        }
        let rhs = dot(&a, &x_star);
        b = b.eq(a, rhs);
    }
    for _ in 0..n {
        let mut a: Vec<f64> = (0..d).map(|_| coef(&mut rng)).collect();
        if pivot.is_some() && dot(&a, &ray) < 0.0 {
            a.iter_mut().for_each(|v| *v = -*v);
        }
        let slack = rng.gen_range(0i32..=3) as f64;
        let rhs = dot(&a, &x_star) - slack;
        b = b.ge(a, rhs);
    }

    for i in 0..d {
        let below = rng.gen_range(0i32..=3) as f64;
        let above = rng.gen_range(0i32..=3) as f64;
        let (mut lo, mut hi) = match bounds {
            BoundStyle::NonNegative => (0.0_f64.min(x_star[i]), f64::INFINITY),
            BoundStyle::Boxed => (x_star[i] - below, x_star[i] + above),
            BoundStyle::Mixed => match rng.gen_range(0..4) {
                0 => (x_star[i] - below, x_star[i] + above),
                1 => (x_star[i] - below, f64::INFINITY),
                2 => (f64::NEG_INFINITY, x_star[i] + above),
                _ => (f64::NEG_INFINITY, f64::INFINITY),
            },
        };
        if ray[i] > 0.0 {
            hi = f64::INFINITY;
        } else if ray[i] < 0.0 {
            lo = f64::NEG_INFINITY;
        }
        b = b.bounds(i, lo, hi);
    }

    if let Some(k) = pivot {
        let cr = dot(&c, &ray);
        if cr >= 0.0 {
            // Shift c_k so that c·ray = -1.
            c[k] -= (cr + 1.0) * ray[k];
        }
    }
    b = b.objective(c);

    if kind == RandomKind::Infeasible {
        let (a0, b0) = if m > 0 {
            let lp = b.clone().build().expect("planted data is well formed");
            (lp.a_eq.row(0).to_vec(), lp.b_eq[0])
        } else {
            let a: Vec<f64> = (0..d).map(|_| coef(&mut rng)).collect();
            let rhs = dot(&a, &x_star);
            b = b.eq(a.clone(), rhs);
            (a, rhs)
        };
        let scale = [-2.0, -1.0, 1.0, 2.0][rng.gen_range(0..4)];
        let shift = rng.gen_range(1i32..=5) as f64;
        b = b.eq(a0.iter().map(|v| v * scale).collect(), b0 * scale + shift);
    }

    b.build().expect("random data is well formed")
}

/// Every generator family behind one descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    KleeMinty1(usize),
    KleeMinty2(usize),
    Cycling(String),
    Random(RandomSpec),
}

impl InstanceSpec {
    pub fn build<T: Scalar>(&self) -> Result<GeneralLp<T>, GeneratorError> {
        match self {
            InstanceSpec::KleeMinty1(d) => klee_minty_v1(*d),
            InstanceSpec::KleeMinty2(d) => klee_minty_v2(*d),
            InstanceSpec::Cycling(id) => cycling_fixture(id),
            InstanceSpec::Random(spec) => Ok(spec.build()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            InstanceSpec::KleeMinty1(d) => format!("km1_d{d}"),
            InstanceSpec::KleeMinty2(d) => format!("km2_d{d}"),
            InstanceSpec::Cycling(id) => format!("cycling_{id}"),
            InstanceSpec::Random(s) => format!("random_s{}_d{}_m{}_n{}", s.seed, s.d, s.m, s.n),
        }
    }
}
