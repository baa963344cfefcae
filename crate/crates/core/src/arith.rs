//! Primality, valuations, perfect powers and the `(p, k, q, l, r)` witnesses
//! extracted from `f(m)` and `f'(m)`.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::nt_funcs::{factors, is_prime as np_is_prime};
use num_prime::{FactorizationConfig, Primality, PrimalityTestConfig, PrimalityUtils};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Miller-Rabin with the first 13 prime bases is deterministic below this
/// bound.
pub const PROVEN_LIMIT: &str = "3317044064679887385961981";

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn proven_limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| PROVEN_LIMIT.parse().expect("decimal literal"))
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| (2..1000u32).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimalityStatus {
    ProvenPrime,
    ProbablePrime,
    Composite,
    Unit,
}

impl PrimalityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PrimalityStatus::ProvenPrime => "proven_prime",
            PrimalityStatus::ProbablePrime => "probable_prime",
            PrimalityStatus::Composite => "composite",
            PrimalityStatus::Unit => "unit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimalityResult {
    pub status: PrimalityStatus,
    pub method: String,
    /// A nontrivial factor of `|x|`, when one turned up.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<BigInt>,
    /// Set for negative input; the status then describes `|x|`.
    #[serde(default)]
    pub negative: bool,
}

impl PrimalityResult {
    fn new(status: PrimalityStatus, method: &str) -> Self {
        PrimalityResult { status, method: method.to_string(), factor: None, negative: false }
    }

    /// Prime in the proven or probable sense. Never true for negative input.
    pub fn is_prime(&self) -> bool {
        !self.negative && matches!(self.status, PrimalityStatus::ProvenPrime | PrimalityStatus::ProbablePrime)
    }

    pub fn is_proven(&self) -> bool {
        !self.negative && self.status == PrimalityStatus::ProvenPrime
    }
}

pub fn is_prime(x: &BigInt) -> PrimalityResult {
    let mut res = classify(x.magnitude());
    res.negative = x.is_negative();
    res
}

fn classify(x: &BigUint) -> PrimalityResult {
    if x.is_zero() {
        return PrimalityResult::new(PrimalityStatus::Composite, "zero");
    }
    if x.is_one() {
        return PrimalityResult::new(PrimalityStatus::Unit, "unit");
    }
    for &p in small_primes() {
        let p_big = BigUint::from(p);
        if *x == p_big {
            return PrimalityResult::new(PrimalityStatus::ProvenPrime, "trial_division");
        }
        if (x % &p_big).is_zero() {
            let mut r = PrimalityResult::new(PrimalityStatus::Composite, "trial_division");
            r.factor = Some(BigInt::from(p));
            return r;
        }
    }
    if *x < BigUint::from(1_000_000u32) {
        return PrimalityResult::new(PrimalityStatus::ProvenPrime, "trial_division");
    }
    if let Some(small) = x.to_u64() {
        let status = match np_is_prime(&small, None) {
            Primality::No => PrimalityStatus::Composite,
            _ => PrimalityStatus::ProvenPrime,
        };
        return PrimalityResult::new(status, "miller_rabin_u64");
    }
    if x < proven_limit() {
        let prime = MR_BASES.iter().all(|&b| x.is_sprp(BigUint::from(b)));
        let status = if prime { PrimalityStatus::ProvenPrime } else { PrimalityStatus::Composite };
        return PrimalityResult::new(status, "miller_rabin_13_bases");
    }
    match np_is_prime(x, Some(PrimalityTestConfig::bpsw())) {
        Primality::No => PrimalityResult::new(PrimalityStatus::Composite, "bpsw"),
        _ => PrimalityResult::new(PrimalityStatus::ProbablePrime, "bpsw"),
    }
}

/// `x = sign * p^v * cofactor` with `p` not dividing `cofactor`; the returned
/// cofactor carries the sign of `x`.
pub fn p_adic_valuation(x: &BigInt, p: &BigInt) -> Result<(u32, BigInt)> {
    if x.is_zero() {
        return Err(Error::ZeroValue);
    }
    if *p < BigInt::from(2) {
        return Err(Error::NotApplicable(format!("valuation base {p} is not a prime")));
    }
    let mut v = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return Ok((v, rest));
        }
        rest = q;
        v += 1;
    }
}

/// Largest `k` with `x = b^k` for a positive integer `b`; `(x, 1)` when `x`
/// is not a perfect power.
pub fn perfect_power(x: &BigInt) -> (BigInt, u32) {
    if *x <= BigInt::one() {
        return (x.clone(), 1);
    }
    let max_k = x.bits() as u32;
    for k in (2..=max_k).rev() {
        let b = x.nth_root(k);
        if b > BigInt::one() && b.pow(k) == *x {
            return (b, k);
        }
    }
    (x.clone(), 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    /// `f(m) = p q` with `p` prime.
    Pq,
    /// `f(m) = p^k q`, `|f'(m)| = p^l r`.
    PrimePower,
}

/// `f(m) = p^k q` with `p` prime and `p` not dividing `q`. In prime-power
/// mode also `|f'(m)| = p^l r` with `p` not dividing `r` and `s = min(l, k/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationWitness {
    pub p: BigInt,
    pub k: u32,
    pub q: BigInt,
    pub ell: Option<u32>,
    pub r: Option<BigInt>,
    pub s: Option<BigRational>,
    pub primality: PrimalityResult,
    /// Other admissible `(p, k, q)` splits with larger `q`.
    pub alternatives: Vec<(BigInt, u32, BigInt)>,
}

impl FactorizationWitness {
    pub fn conditional(&self) -> bool {
        self.primality.status == PrimalityStatus::ProbablePrime
    }
}

fn split_prime_power(c: &BigInt, mode: WitnessMode) -> Option<(BigInt, u32, PrimalityResult)> {
    match mode {
        WitnessMode::Pq => {
            let pr = is_prime(c);
            pr.is_prime().then(|| (c.clone(), 1, pr))
        }
        WitnessMode::PrimePower => {
            let (b, k) = perfect_power(c);
            let pr = is_prime(&b);
            pr.is_prime().then_some((b, k, pr))
        }
    }
}

/// Finds the split `value = p^k q` with the smallest `q <= q_max`. When
/// `f'(m) = 0` in prime-power mode the derivative puts no limit on the
/// exponent, recorded as `l = k`, `r = 0`.
pub fn extract_witness(
    value: &BigInt,
    derivative_value: &BigInt,
    q_max: u64,
    mode: WitnessMode,
) -> Result<Option<FactorizationWitness>> {
    if !value.is_positive() {
        return Err(Error::NonPositiveValue);
    }
    if q_max == 0 {
        return Err(Error::NotApplicable("q_max must be at least 1".into()));
    }
    let mut found: Option<FactorizationWitness> = None;
    let mut alternatives = Vec::new();
    for q in 1..=q_max {
        let q = BigInt::from(q);
        if q > *value {
            break;
        }
        let (c, rem) = value.div_rem(&q);
        if !rem.is_zero() {
            continue;
        }
        let Some((p, k, primality)) = split_prime_power(&c, mode) else { continue };
        if (&q % &p).is_zero() {
            continue;
        }
        if found.is_some() {
            alternatives.push((p, k, q));
            continue;
        }
        let (ell, r, s) = match mode {
            WitnessMode::Pq => (None, None, None),
            WitnessMode::PrimePower => {
                let (ell, r) = if derivative_value.is_zero() {
                    (k, BigInt::zero())
                } else {
                    let (ell, r) = p_adic_valuation(&derivative_value.abs(), &p)?;
                    (ell, r)
                };
                let s = BigRational::from_integer(ell.into()).min(BigRational::new(k.into(), 2.into()));
                (Some(ell), Some(r), Some(s))
            }
        };
        found = Some(FactorizationWitness { p, k, q, ell, r, s, primality, alternatives: Vec::new() });
    }
    Ok(found.map(|mut w| {
        w.alternatives = alternatives;
        w
    }))
}

/// Prime factorization of `|x|` with every factor proven prime; fails with
/// [`Error::OutOfReach`] otherwise.
pub fn factorize(x: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if x.is_zero() {
        return Err(Error::ZeroValue);
    }
    let mag = x.magnitude().clone();
    if mag.is_one() {
        return Ok(Vec::new());
    }
    let (found, rest) = factors(mag, Some(FactorizationConfig::default()));
    if let Some(rest) = rest {
        return Err(Error::OutOfReach(format!("{} cofactor(s) left unsplit", rest.len())));
    }
    let mut out = Vec::with_capacity(found.len());
    for (p, e) in found {
        let p = BigInt::from_biguint(Sign::Plus, p);
        if !is_prime(&p).is_proven() {
            return Err(Error::OutOfReach(format!("factor {p} is not provably prime")));
        }
        out.push((p, e as u32));
    }
    Ok(out)
}

/// Positive divisors, ascending.
pub fn divisors(factorization: &[(BigInt, u32)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factorization {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut pk = d.clone();
            for _ in 0..=*e {
                next.push(pk.clone());
                pk *= p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

const MAX_RATIONAL_CANDIDATES: usize = 4_000_000;

/// A rational root of `f`, if any, by the rational root theorem. Fails with
/// [`Error::OutOfReach`] when `a_0` or `a_n` cannot be fully factored.
pub fn has_rational_root(f: &Polynomial) -> Result<Option<BigRational>> {
    if f.is_zero() {
        return Err(Error::NotApplicable("zero polynomial".into()));
    }
    if f.degree() == 0 {
        return Ok(None);
    }
    let a0 = f.constant_term();
    if a0.is_zero() {
        return Ok(Some(BigRational::zero()));
    }
    let an = f.leading();
    let nums = divisors(&factorize(&a0)?);
    let dens = divisors(&factorize(&an)?);
    if nums.len().saturating_mul(dens.len()) > MAX_RATIONAL_CANDIDATES {
        return Err(Error::OutOfReach("too many rational root candidates".into()));
    }
    let f1 = f.evaluate(&BigInt::one());
    let fm1 = f.evaluate(&-BigInt::one());
    let n = f.degree();
    let mut seen = BTreeSet::new();
    for q in &dens {
        for p0 in &nums {
            if !p0.gcd(q).is_one() {
                continue;
            }
            for p in [p0.clone(), -p0] {
                // f(p/q) = 0 forces (q - p) | f(1) and (q + p) | f(-1)
                let qm = q - &p;
                let qp = q + &p;
                if !qm.is_zero() && !(&f1 % &qm).is_zero() {
                    continue;
                }
                if !qp.is_zero() && !(&fm1 % &qp).is_zero() {
                    continue;
                }
                if !seen.insert((p.clone(), q.clone())) {
                    continue;
                }
                if homogeneous_eval(f, &p, q, n).is_zero() {
                    return Ok(Some(BigRational::new(p, q.clone())));
                }
            }
        }
    }
    Ok(None)
}

/// `q^n f(p/q)`.
fn homogeneous_eval(f: &Polynomial, p: &BigInt, q: &BigInt, n: usize) -> BigInt {
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        acc = acc * p + c * &qpow;
        if i > 0 {
            qpow *= q;
        }
    }
    debug_assert!(f.coeffs().len() == n + 1);
    acc
}
