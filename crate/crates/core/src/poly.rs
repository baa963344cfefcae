//! Exact integer polynomials and the coefficient-sign machinery used by the
//! sector producers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, ParseError, Result};

/// Polynomial with arbitrary-precision integer coefficients, stored by
/// increasing exponent. Trailing zeros are trimmed, so the last stored
/// coefficient is the leading one (the zero polynomial stores nothing).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * X^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Horner evaluation.
    pub fn evaluate(&self, m: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * m + c)
    }

    pub fn evaluate_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    pub fn derivative(&self) -> Polynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `X^n f(1/X)`, i.e. the coefficient list reversed.
    pub fn reciprocal(&self) -> Result<Polynomial> {
        if self.degree() == 0 {
            return Err(Error::DegreeTooLow { required: 1, found: self.degree() });
        }
        if self.constant_term().is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(Self::new(self.coeffs.iter().rev().cloned().collect()))
    }

    /// `f(-X)`.
    pub fn negate_argument(&self) -> Polynomial {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `f(X + alpha)` with exact rational coefficients
    /// `b_k = sum_i alpha^i a_{k+i} C(k+i, i)`.
    pub fn shift(&self, alpha: &BigRational) -> RationalPolynomial {
        RationalPolynomial::from(self).shift(alpha)
    }

    /// The sums `s_j = alpha^j a_n + alpha^{j-1} a_{n-1} + ... + a_{n-j}`.
    pub fn partial_sums(&self, alpha: &BigRational) -> Result<PartialSums> {
        if self.degree() == 0 {
            return Err(Error::DegreeTooLow { required: 1, found: self.degree() });
        }
        let mut sums = Vec::with_capacity(self.coeffs.len());
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * alpha + BigRational::from_integer(c.clone());
            sums.push(acc.clone());
        }
        let all_nonneg = sums.iter().all(|s| !s.is_negative());
        Ok(PartialSums { alpha: alpha.clone(), sums, all_nonneg })
    }

    pub fn sign_index_sets(&self) -> Result<SignIndexSets> {
        self.require_positive_leading()?;
        let neg_indices: Vec<usize> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_negative())
            .map(|(i, _)| i)
            .collect();
        let neg_sum_abs: BigInt = neg_indices.iter().map(|&i| -&self.coeffs[i]).sum();
        let pos_indices_above = match neg_indices.last() {
            Some(&last) => (last + 1..self.coeffs.len())
                .filter(|&k| self.coeffs[k].is_positive())
                .collect(),
            None => Vec::new(),
        };
        Ok(SignIndexSets { neg_indices, pos_indices_above, neg_sum_abs })
    }

    /// Partition of the nonzero coefficients into maximal same-sign runs,
    /// read from the leading coefficient downwards.
    pub fn sign_blocks(&self) -> Result<SignBlockPartition> {
        self.require_positive_leading()?;
        // (highest index, lowest index, magnitude sum, positive?)
        let mut runs: Vec<(usize, usize, BigInt, bool)> = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let positive = c.is_positive();
            match runs.last_mut() {
                Some(run) if run.3 == positive => {
                    run.1 = i;
                    run.2 += c.abs();
                }
                _ => runs.push((i, i, c.abs(), positive)),
            }
        }
        let sign_changes = runs.len() - 1;
        let mut blocks = Vec::with_capacity(runs.len() / 2 + 1);
        let mut iter = runs.into_iter();
        while let Some((pos_hi, pos_lo, pos_sum, _)) = iter.next() {
            let neg = iter.next().map(|(hi, lo, sum, _)| NegativeRun { hi, lo, sum });
            blocks.push(SignBlock { pos_hi, pos_lo, pos_sum, neg });
        }
        Ok(SignBlockPartition { blocks, sign_changes })
    }

    /// Canonical coefficient-list form `a0,a1,...,an`.
    pub fn to_coeff_list(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub(crate) fn require_positive_leading(&self) -> Result<()> {
        if self.leading().is_positive() {
            Ok(())
        } else {
            Err(Error::NonPositiveLeading)
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "X")?;
                    } else {
                        write!(f, "X^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        crate::parse::parse_polynomial(s)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Polynomial with exact rational coefficients; the result type of shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Integer polynomial when every coefficient is integral.
    pub fn to_integer(&self) -> Option<Polynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Polynomial::new)
    }

    pub fn shift(&self, alpha: &BigRational) -> RationalPolynomial {
        let n = self.coeffs.len();
        let mut powers = Vec::with_capacity(n);
        let mut p = BigRational::one();
        for _ in 0..n {
            powers.push(p.clone());
            p *= alpha;
        }
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut b = BigRational::zero();
            // C(k+i, i), updated incrementally
            let mut binom = BigInt::one();
            for i in 0..n - k {
                if i > 0 {
                    binom = binom * BigInt::from(k + i) / BigInt::from(i);
                }
                b += &powers[i] * &self.coeffs[k + i] * BigRational::from_integer(binom.clone());
            }
            out.push(b);
        }
        RationalPolynomial::new(out)
    }
}

impl From<&Polynomial> for RationalPolynomial {
    fn from(f: &Polynomial) -> Self {
        RationalPolynomial::new(
            f.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

/// Indices of negative coefficients, positive coefficients above the last
/// negative one, and the absolute sum of the negative coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignIndexSets {
    pub neg_indices: Vec<usize>,
    pub pos_indices_above: Vec<usize>,
    pub neg_sum_abs: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeRun {
    /// Highest index of the run.
    pub hi: usize,
    /// Lowest index of the run.
    pub lo: usize,
    /// Sum of absolute values over the run.
    pub sum: BigInt,
}

/// A positive run followed (except possibly for the last block) by a
/// negative run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignBlock {
    pub pos_hi: usize,
    pub pos_lo: usize,
    pub pos_sum: BigInt,
    pub neg: Option<NegativeRun>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignBlockPartition {
    pub blocks: Vec<SignBlock>,
    pub sign_changes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSums {
    pub alpha: BigRational,
    pub sums: Vec<BigRational>,
    pub all_nonneg: bool,
}
