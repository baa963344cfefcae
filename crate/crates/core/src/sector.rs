//! Zero-free sectors `S_{v,theta}` with outward-rounded vertices.
//!
//! Each producer returns a [`Sector`] whose polynomial has no root `z` with
//! `Re(z) > v` and `|arg(z - v)| < theta`, for every `v >= vertex.upper`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounded::{nth_root_bounds, BoundedReal, Precision};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// The theorem family that produced a sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorMethod {
    Nonneg,
    NegSum,
    MinOverPositives,
    SummedDenominator,
    SignBlocks,
    Shifted,
    Parametrized,
}

impl SectorMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SectorMethod::Nonneg => "nonneg",
            SectorMethod::NegSum => "neg_sum",
            SectorMethod::MinOverPositives => "min_over_positives",
            SectorMethod::SummedDenominator => "summed_denominator",
            SectorMethod::SignBlocks => "sign_blocks",
            SectorMethod::Shifted => "shifted",
            SectorMethod::Parametrized => "parametrized",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            SectorMethod::Nonneg,
            SectorMethod::NegSum,
            SectorMethod::MinOverPositives,
            SectorMethod::SummedDenominator,
            SectorMethod::SignBlocks,
            SectorMethod::Shifted,
            SectorMethod::Parametrized,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
    }
}

impl fmt::Display for SectorMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Half-angle of the sector: `pi/n` or `pi/(2n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfAngle {
    PiOverN,
    PiOver2N,
}

impl HalfAngle {
    pub fn label(&self) -> &'static str {
        match self {
            HalfAngle::PiOverN => "pi/n",
            HalfAngle::PiOver2N => "pi/2n",
        }
    }

    /// Denominator `d` with the half-angle equal to `pi/d`.
    pub fn denominator(&self, n: usize) -> u64 {
        match self {
            HalfAngle::PiOverN => n as u64,
            HalfAngle::PiOver2N => 2 * n as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    pub vertex: BoundedReal,
    /// Degree `n` of the polynomial; the half-angle is `pi/n` or `pi/(2n)`.
    pub n: usize,
    pub half_angle: HalfAngle,
    pub method: SectorMethod,
    /// Shift used by [`SectorMethod::Shifted`].
    pub alpha: Option<BigRational>,
}

impl Sector {
    fn new(vertex: BoundedReal, n: usize, method: SectorMethod) -> Self {
        debug_assert!(!vertex.lower.is_negative());
        Sector { vertex, n, half_angle: HalfAngle::PiOverN, method, alpha: None }
    }

    pub fn angle_denominator(&self) -> u64 {
        self.half_angle.denominator(self.n)
    }

    pub fn half_angle_f64(&self) -> f64 {
        std::f64::consts::PI / self.angle_denominator() as f64
    }
}

fn check_basic(f: &Polynomial) -> Result<usize> {
    if f.degree() < 1 {
        return Err(Error::DegreeTooLow { required: 1, found: f.degree() });
    }
    f.require_positive_leading()?;
    Ok(f.degree())
}

fn rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Enclosure of `max_i base_i^(1/deg_i)`. For a fixed base the radical is
/// monotone in the root index (decreasing when the base is at least one,
/// increasing below one), so one radical per distinct base suffices.
pub(crate) fn max_radicals(items: &[(BigRational, u32)], prec: &Precision) -> BoundedReal {
    let mut best: BTreeMap<BigRational, u32> = BTreeMap::new();
    for (base, deg) in items {
        assert!(*deg >= 1);
        best.entry(base.clone())
            .and_modify(|d| {
                *d = if *base >= BigRational::one() { (*d).min(*deg) } else { (*d).max(*deg) }
            })
            .or_insert(*deg);
    }
    best.iter()
        .map(|(base, deg)| nth_root_bounds(base, *deg, prec))
        .reduce(|a, b| a.max(&b))
        .expect("at least one radical")
}

/// Non-negative coefficients: no zero in `S_{0, pi/n}`.
pub fn sector_nonneg(f: &Polynomial) -> Result<Sector> {
    let n = check_basic(f)?;
    if !f.is_nonnegative() {
        return Err(Error::NegativeCoefficient);
    }
    Ok(Sector::new(BoundedReal::zero(), n, SectorMethod::Nonneg))
}

/// Non-negative coefficients: `Re f > 0` on `S_{0, pi/(2n)}`.
pub fn sector_nonneg_real_part(f: &Polynomial) -> Result<Sector> {
    let mut s = sector_nonneg(f)?;
    s.half_angle = HalfAngle::PiOver2N;
    Ok(s)
}

/// Vertex `max_i (L_-/a_n)^(1/(n - j_i))`, evaluated at the two extreme
/// negative indices.
pub fn sector_neg_sum(f: &Polynomial, prec: &Precision) -> Result<Sector> {
    let n = check_basic(f)?;
    let sets = f.sign_index_sets()?;
    let (Some(&first), Some(&last)) = (sets.neg_indices.first(), sets.neg_indices.last()) else {
        let mut s = sector_nonneg(f)?;
        s.method = SectorMethod::NegSum;
        return Ok(s);
    };
    let base = rat(&sets.neg_sum_abs) / rat(&f.leading());
    let v = max_radicals(&[(base.clone(), (n - first) as u32), (base, (n - last) as u32)], prec);
    Ok(Sector::new(v, n, SectorMethod::NegSum))
}

/// Vertex `max_i (|a_{j_i}| / (lambda_i a_n))^(1/(n - j_i))` for weights
/// `lambda_i > 0` summing to one, one per negative coefficient.
pub fn sector_parametrized(f: &Polynomial, lambdas: &[BigRational], prec: &Precision) -> Result<Sector> {
    let n = check_basic(f)?;
    let sets = f.sign_index_sets()?;
    if sets.neg_indices.is_empty() {
        return Err(Error::NoNegativeCoefficient);
    }
    if lambdas.len() != sets.neg_indices.len() {
        return Err(Error::InvalidWeights(format!(
            "expected {} weights, got {}",
            sets.neg_indices.len(),
            lambdas.len()
        )));
    }
    if lambdas.iter().any(|l| !l.is_positive()) {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    let total: BigRational = lambdas.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    let a_n = rat(&f.leading());
    let items: Vec<_> = sets
        .neg_indices
        .iter()
        .zip(lambdas)
        .map(|(&j, lambda)| (rat(&-f.coeff(j)) / (lambda * &a_n), (n - j) as u32))
        .collect();
    Ok(Sector::new(max_radicals(&items, prec), n, SectorMethod::Parametrized))
}

/// Uniform weights `1/l`.
pub fn uniform_weights(ell: usize) -> Vec<BigRational> {
    vec![BigRational::new(BigInt::one(), BigInt::from(ell)); ell]
}

/// Weights `|a_{j_i}| / L_-`, which reproduce [`sector_neg_sum`].
pub fn proportional_weights(f: &Polynomial) -> Result<Vec<BigRational>> {
    let sets = f.sign_index_sets()?;
    let total = rat(&sets.neg_sum_abs);
    Ok(sets.neg_indices.iter().map(|&j| rat(&-f.coeff(j)) / &total).collect())
}

/// Binomial weights `C(l, i)` for `i = 1..l`, normalized to sum to one.
pub fn binomial_weights(ell: usize) -> Vec<BigRational> {
    let mut binom = BigInt::one();
    let mut raw = Vec::with_capacity(ell);
    for i in 1..=ell {
        binom = binom * BigInt::from(ell + 1 - i) / BigInt::from(i);
        raw.push(binom.clone());
    }
    let total: BigInt = raw.iter().sum();
    raw.into_iter().map(|c| BigRational::new(c, total.clone())).collect()
}

/// Minimum over the positive coefficients `a_{k_r}` above the last negative
/// index of `max_i (L_-/a_{k_r})^(1/(k_r - j_i))`.
pub fn sector_min_over_positives(f: &Polynomial, prec: &Precision) -> Result<Sector> {
    let n = check_basic(f)?;
    let sets = f.sign_index_sets()?;
    if sets.neg_indices.is_empty() {
        return Err(Error::NoNegativeCoefficient);
    }
    let l = rat(&sets.neg_sum_abs);
    let v = sets
        .pos_indices_above
        .iter()
        .map(|&k| {
            let base = &l / rat(&f.coeff(k));
            let items: Vec<_> = sets.neg_indices.iter().map(|&j| (base.clone(), (k - j) as u32)).collect();
            max_radicals(&items, prec)
        })
        .reduce(|a, b| a.min(&b))
        .expect("leading coefficient is positive and above every negative index");
    Ok(Sector::new(v, n, SectorMethod::MinOverPositives))
}

/// Vertex `max{1, max_i (L_- / (a_{k_1}+...+a_{k_t}))^(1/(k_1 - j_i))}`,
/// also applied when `t = 1`.
pub fn sector_summed_denominator(f: &Polynomial, prec: &Precision) -> Result<Sector> {
    let n = check_basic(f)?;
    let sets = f.sign_index_sets()?;
    if sets.neg_indices.is_empty() {
        return Err(Error::NoNegativeCoefficient);
    }
    let k1 = sets.pos_indices_above[0];
    let d: BigInt = sets.pos_indices_above.iter().map(|&k| f.coeff(k)).sum();
    let base = rat(&sets.neg_sum_abs) / rat(&d);
    let items: Vec<_> = sets.neg_indices.iter().map(|&j| (base.clone(), (k1 - j) as u32)).collect();
    let v = max_radicals(&items, prec).max(&BoundedReal::one());
    Ok(Sector::new(v, n, SectorMethod::SummedDenominator))
}

/// Maximum of the per-block vertices
/// `v_j = max{1, max_{n_j <= i <= N_j} (S_j^-/S_j^+)^(1/(p_j - i))}`.
pub fn sector_sign_blocks(f: &Polynomial, prec: &Precision) -> Result<Sector> {
    let n = check_basic(f)?;
    let part = f.sign_blocks()?;
    if part.sign_changes == 0 {
        return Err(Error::NoSignChanges);
    }
    let mut v = BoundedReal::one();
    for block in &part.blocks {
        let Some(neg) = &block.neg else { continue };
        let base = rat(&neg.sum) / rat(&block.pos_sum);
        let items: Vec<_> = (neg.lo..=neg.hi).map(|i| (base.clone(), (block.pos_lo - i) as u32)).collect();
        v = v.max(&max_radicals(&items, prec));
    }
    Ok(Sector::new(v, n, SectorMethod::SignBlocks))
}

/// Vertex `alpha` when every partial sum `s_{f,j,alpha}` is non-negative;
/// `None` otherwise.
pub fn sector_shifted(f: &Polynomial, alpha: &BigRational) -> Result<Option<Sector>> {
    let n = check_basic(f)?;
    if alpha.is_negative() {
        return Err(Error::NotApplicable("shift must be non-negative".into()));
    }
    let sums = f.partial_sums(alpha)?;
    Ok(sums.all_nonneg.then(|| {
        let mut s = Sector::new(BoundedReal::exact(alpha.clone()), n, SectorMethod::Shifted);
        s.alpha = Some(alpha.clone());
        s
    }))
}

/// One producer's outcome inside [`best_sector`].
#[derive(Clone, Debug)]
pub struct Candidate {
    pub method: SectorMethod,
    pub alpha: Option<BigRational>,
    pub outcome: std::result::Result<Sector, String>,
}

#[derive(Clone, Debug)]
pub struct SectorReport {
    pub best: Sector,
    pub candidates: Vec<Candidate>,
}

pub fn default_shifts() -> Vec<BigRational> {
    vec![BigRational::zero(), BigRational::one()]
}

#[derive(Clone)]
enum Job {
    Nonneg,
    NegSum,
    MinOverPositives,
    SummedDenominator,
    SignBlocks,
    Shifted(BigRational),
    Uniform,
}

/// Runs every producer and keeps the sector with the smallest
/// `vertex.upper`; ties go to the producer listed first.
pub fn best_sector(f: &Polynomial, alphas: Option<&[BigRational]>, prec: &Precision) -> Result<SectorReport> {
    check_basic(f)?;
    let shifts = alphas.map(<[_]>::to_vec).unwrap_or_else(default_shifts);
    let mut jobs = vec![
        Job::Nonneg,
        Job::NegSum,
        Job::MinOverPositives,
        Job::SummedDenominator,
        Job::SignBlocks,
    ];
    jobs.extend(shifts.into_iter().map(Job::Shifted));
    jobs.push(Job::Uniform);

    let candidates: Vec<Candidate> = jobs
        .par_iter()
        .map(|job| {
            let (method, alpha, outcome) = match job {
                Job::Nonneg => (SectorMethod::Nonneg, None, sector_nonneg(f)),
                Job::NegSum => (SectorMethod::NegSum, None, sector_neg_sum(f, prec)),
                Job::MinOverPositives => (SectorMethod::MinOverPositives, None, sector_min_over_positives(f, prec)),
                Job::SummedDenominator => (SectorMethod::SummedDenominator, None, sector_summed_denominator(f, prec)),
                Job::SignBlocks => (SectorMethod::SignBlocks, None, sector_sign_blocks(f, prec)),
                Job::Shifted(a) => (
                    SectorMethod::Shifted,
                    Some(a.clone()),
                    sector_shifted(f, a).and_then(|s| {
                        s.ok_or_else(|| Error::NotApplicable("a partial sum is negative".into()))
                    }),
                ),
                Job::Uniform => {
                    let ell = f.sign_index_sets().map(|s| s.neg_indices.len()).unwrap_or(0);
                    let res = if ell == 0 {
                        Err(Error::NoNegativeCoefficient)
                    } else {
                        sector_parametrized(f, &uniform_weights(ell), prec)
                    };
                    (SectorMethod::Parametrized, None, res)
                }
            };
            Candidate { method, alpha, outcome: outcome.map_err(|e| e.to_string()) }
        })
        .collect();

    let best = candidates
        .iter()
        .filter_map(|c| c.outcome.as_ref().ok())
        .fold(None::<&Sector>, |acc, s| match acc {
            Some(b) if b.vertex.upper <= s.vertex.upper => Some(b),
            _ => Some(s),
        })
        .cloned()
        .expect("neg_sum always applies when the leading coefficient is positive");
    Ok(SectorReport { best, candidates })
}
