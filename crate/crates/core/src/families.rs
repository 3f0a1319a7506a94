//! Seeded generators for the set families the sumset bounds apply to.
//!
//! Randomized kinds draw from `XorShiftRng` (Marsaglia's xorshift128)
//! seeded through `SeedableRng::seed_from_u64`, so a spec regenerates the
//! same set on every platform.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::FiniteRealSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `{i² : 1 ≤ i ≤ n}`
    #[serde(alias = "squares")]
    ConvexSquares,
    /// `{i³ : 1 ≤ i ≤ n}`
    #[serde(alias = "cubes")]
    ConvexCubes,
    /// partial sums of strictly increasing random integer gaps; params `[max_extra]`
    #[serde(alias = "random-gaps")]
    ConvexRandomGaps,
    /// params `[start, step]`, default `[0, 1]`
    #[serde(alias = "ap")]
    ArithmeticProgression,
    /// params `[ratio, start]`, default `[2, 1]`
    #[serde(alias = "gp")]
    GeometricProgression,
    /// a convex map applied to `{1, …, n}`; params `[map_id]`
    #[serde(alias = "image")]
    ConvexImage,
    /// `n` distinct integers from `[0, range)`; params `[range]`, default `4n`
    #[serde(alias = "random")]
    RandomUniform,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::ConvexSquares,
        FamilyKind::ConvexCubes,
        FamilyKind::ConvexRandomGaps,
        FamilyKind::ArithmeticProgression,
        FamilyKind::GeometricProgression,
        FamilyKind::ConvexImage,
        FamilyKind::RandomUniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::ConvexSquares => "convex-squares",
            FamilyKind::ConvexCubes => "convex-cubes",
            FamilyKind::ConvexRandomGaps => "convex-random-gaps",
            FamilyKind::ArithmeticProgression => "arithmetic-progression",
            FamilyKind::GeometricProgression => "geometric-progression",
            FamilyKind::ConvexImage => "convex-image",
            FamilyKind::RandomUniform => "random-uniform",
        }
    }

    /// Kinds whose output is convex by construction.
    pub fn is_convex(self) -> bool {
        !matches!(self, FamilyKind::ArithmeticProgression | FamilyKind::RandomUniform)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "convex-squares" | "squares" => FamilyKind::ConvexSquares,
            "convex-cubes" | "cubes" => FamilyKind::ConvexCubes,
            "convex-random-gaps" | "random-gaps" => FamilyKind::ConvexRandomGaps,
            "arithmetic-progression" | "ap" => FamilyKind::ArithmeticProgression,
            "geometric-progression" | "gp" => FamilyKind::GeometricProgression,
            "convex-image" | "image" => FamilyKind::ConvexImage,
            "random-uniform" | "random" => FamilyKind::RandomUniform,
            other => return Err(Error::Family(format!("unknown family kind {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: Vec<Rational>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: usize) -> Self {
        FamilySpec {
            kind,
            n,
            seed: 0,
            params: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_params(mut self, params: Vec<Rational>) -> Self {
        self.params = params;
        self
    }

    /// Short label such as `convex-squares(n=64)`.
    pub fn label(&self) -> String {
        let mut s = format!("{}(n={}", self.kind, self.n);
        if matches!(self.kind, FamilyKind::ConvexRandomGaps | FamilyKind::RandomUniform) {
            s += &format!(",seed={}", self.seed);
        }
        for p in &self.params {
            s += &format!(",{p}");
        }
        s + ")"
    }

    fn param(&self, i: usize, default: Rational) -> Rational {
        self.params.get(i).cloned().unwrap_or(default)
    }

    fn int_param(&self, i: usize, default: i64) -> Result<i64> {
        let p = self.param(i, Rational::from(default));
        if !p.is_integer() {
            return Err(Error::Family(format!("{} parameter {i} must be an integer, got {p}", self.kind)));
        }
        p.numer()
            .to_i64()
            .ok_or_else(|| Error::Family(format!("{} parameter {i} is out of range", self.kind)))
    }
}

fn power_set(n: usize, e: u32) -> Result<FiniteRealSet> {
    FiniteRealSet::new((1..=n).map(|i| Rational::from_integer(num_traits::Pow::pow(BigInt::from(i), e))))
}

pub fn generate(spec: &FamilySpec) -> Result<FiniteRealSet> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Family("n must be at least 1".into()));
    }
    match spec.kind {
        FamilyKind::ConvexSquares => power_set(n, 2),
        FamilyKind::ConvexCubes => power_set(n, 3),
        FamilyKind::ConvexRandomGaps => {
            let extra = spec.int_param(0, 4)?;
            if extra < 0 {
                return Err(Error::Family("max_extra must be nonnegative".into()));
            }
            let mut rng = XorShiftRng::seed_from_u64(spec.seed);
            let mut elems = vec![BigInt::from(0)];
            let mut gap = BigInt::from(0);
            for _ in 1..n {
                gap += 1 + rng.random_range(0..=extra);
                let next = elems.last().unwrap() + &gap;
                elems.push(next);
            }
            FiniteRealSet::new(elems.into_iter().map(Rational::from_integer))
        }
        FamilyKind::ArithmeticProgression => {
            let start = spec.param(0, Rational::zero());
            let step = spec.param(1, Rational::one());
            if step.is_zero() {
                return Err(Error::Family("progression step must be nonzero".into()));
            }
            FiniteRealSet::new((0..n as i64).map(|i| &start + &(&step * &Rational::from(i))))
        }
        FamilyKind::GeometricProgression => {
            let ratio = spec.param(0, Rational::from(2));
            let start = spec.param(1, Rational::one());
            if !ratio.is_positive() || ratio == Rational::one() {
                return Err(Error::Family(format!("ratio must be positive and not 1, got {ratio}")));
            }
            if start.is_zero() {
                return Err(Error::Family("progression start must be nonzero".into()));
            }
            let mut elems = Vec::with_capacity(n);
            let mut x = start;
            for _ in 0..n {
                let next = &x * &ratio;
                elems.push(x);
                x = next;
            }
            FiniteRealSet::new(elems)
        }
        FamilyKind::ConvexImage => {
            let id = spec.int_param(0, 0)?;
            let map = ConvexMap::from_id(id)?;
            if map == ConvexMap::DyadicLog {
                return Err(Error::Family("dyadic-log is not defined on {1..n}".into()));
            }
            let base = FiniteRealSet::from_integers(1..=n as i64)?;
            apply_convex_map(&base, map)
        }
        FamilyKind::RandomUniform => {
            let range = spec.int_param(0, 4 * n as i64)?;
            if range < n as i64 {
                return Err(Error::Family(format!("range {range} cannot hold {n} distinct values")));
            }
            let mut rng = XorShiftRng::seed_from_u64(spec.seed);
            let mut picked = BTreeSet::new();
            while picked.len() < n {
                picked.insert(rng.random_range(0..range));
            }
            FiniteRealSet::from_integers(picked)
        }
    }
}

/// Exact maps that are strictly convex or concave and injective on their domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvexMap {
    /// `x²` on `x ≥ 0`
    Square,
    /// `x³`
    Cube,
    /// `1/x` on `x ≠ 0`
    Reciprocal,
    /// `log₂ x` on exact powers of two
    DyadicLog,
}

impl ConvexMap {
    pub fn from_id(id: i64) -> Result<Self> {
        match id {
            0 => Ok(ConvexMap::Square),
            1 => Ok(ConvexMap::Cube),
            2 => Ok(ConvexMap::Reciprocal),
            3 => Ok(ConvexMap::DyadicLog),
            _ => Err(Error::Family(format!("unknown map id {id}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConvexMap::Square => "square",
            ConvexMap::Cube => "cube",
            ConvexMap::Reciprocal => "reciprocal",
            ConvexMap::DyadicLog => "dyadic-log",
        }
    }

    pub fn apply(self, x: &Rational) -> Result<Rational> {
        let outside = || Error::MapDomain(x.to_string());
        match self {
            ConvexMap::Square if x.is_negative() => Err(outside()),
            ConvexMap::Square => Ok(x * x),
            ConvexMap::Cube => Ok(&(x * x) * x),
            ConvexMap::Reciprocal => x.recip().ok_or_else(outside),
            ConvexMap::DyadicLog => x.dyadic_log().map(Rational::from).ok_or_else(outside),
        }
    }
}

impl FromStr for ConvexMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" | "squaring" => Ok(ConvexMap::Square),
            "cube" => Ok(ConvexMap::Cube),
            "reciprocal" => Ok(ConvexMap::Reciprocal),
            "dyadic-log" | "log2" => Ok(ConvexMap::DyadicLog),
            other => Err(Error::Family(format!("unknown map {other:?}"))),
        }
    }
}

/// `f(A)` as a set.
pub fn apply_convex_map(a: &FiniteRealSet, map: ConvexMap) -> Result<FiniteRealSet> {
    let image: Vec<Rational> = a.iter().map(|x| map.apply(x)).collect::<Result<_>>()?;
    FiniteRealSet::new(image)
}
