//! Two-sided rational enclosures for the irrational quantities that appear
//! in the region formulas (radicals, sines, cotangents, arctangents, pi).
//!
//! Every enclosure satisfies `lower <= true value <= upper`. Series are
//! truncated only where the remainder is bounded by the next term of an
//! alternating series with decreasing terms.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of significant decimal digits for enclosure widths.
pub const DEFAULT_DIGITS: u32 = 12;

/// Target precision: enclosures are tightened until
/// `upper - lower <= 10^-digits * max(1, |upper|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: DEFAULT_DIGITS }
    }
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Precision { digits: digits.clamp(1, 10_000) }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn doubled(&self) -> Self {
        Precision::new(self.digits * 2)
    }

    /// Binary working precision for primitive enclosures; carries enough
    /// guard bits that a handful of arithmetic steps stay within target.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 24
    }

    /// Number of fractional decimal digits used when serializing bounds.
    pub fn decimal_places(&self) -> u32 {
        self.digits + 8
    }

    pub fn width_target(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(10).pow(self.digits))
    }

    pub fn accepts(&self, b: &BoundedReal) -> bool {
        let scale = b.upper.abs().max(BigRational::one());
        b.width() <= self.width_target() * scale
    }

    /// Runs `compute` at increasing binary precision until the enclosure
    /// meets the width target.
    pub fn tighten(&self, mut compute: impl FnMut(u32) -> BoundedReal) -> BoundedReal {
        let mut bits = self.bits();
        for _ in 0..6 {
            let b = compute(bits);
            if self.accepts(&b) {
                return b;
            }
            bits *= 2;
        }
        compute(bits)
    }

    /// Fallible variant of [`Precision::tighten`].
    pub fn try_tighten(&self, mut compute: impl FnMut(u32) -> Result<BoundedReal>) -> Result<BoundedReal> {
        let mut bits = self.bits();
        for _ in 0..6 {
            let b = compute(bits)?;
            if self.accepts(&b) {
                return Ok(b);
            }
            bits *= 2;
        }
        compute(bits)
    }
}

/// Closed rational enclosure `[lower, upper]` of a real number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedReal {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl BoundedReal {
    pub fn new(lower: BigRational, upper: BigRational) -> Self {
        assert!(lower <= upper, "inverted enclosure [{lower}, {upper}]");
        BoundedReal { lower, upper }
    }

    pub fn exact(value: BigRational) -> Self {
        BoundedReal { lower: value.clone(), upper: value }
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self::exact(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self::exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::exact(BigRational::one())
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn intersects(&self, other: &BoundedReal) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lower + &self.upper) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn add(&self, rhs: &BoundedReal) -> BoundedReal {
        BoundedReal::new(&self.lower + &rhs.lower, &self.upper + &rhs.upper)
    }

    pub fn sub(&self, rhs: &BoundedReal) -> BoundedReal {
        BoundedReal::new(&self.lower - &rhs.upper, &self.upper - &rhs.lower)
    }

    pub fn neg(&self) -> BoundedReal {
        BoundedReal::new(-&self.upper, -&self.lower)
    }

    pub fn mul(&self, rhs: &BoundedReal) -> BoundedReal {
        let products = [
            &self.lower * &rhs.lower,
            &self.lower * &rhs.upper,
            &self.upper * &rhs.lower,
            &self.upper * &rhs.upper,
        ];
        let lo = products.iter().min().cloned().expect("nonempty");
        let hi = products.iter().max().cloned().expect("nonempty");
        BoundedReal::new(lo, hi)
    }

    pub fn scale(&self, k: &BigRational) -> BoundedReal {
        self.mul(&BoundedReal::exact(k.clone()))
    }

    /// `1 / self`; fails when the enclosure touches zero.
    pub fn recip(&self) -> Result<BoundedReal> {
        if !self.lower.is_positive() && !self.upper.is_negative() {
            return Err(Error::NotApplicable("reciprocal of an enclosure containing zero".into()));
        }
        Ok(BoundedReal::new(self.upper.recip(), self.lower.recip()))
    }

    pub fn div(&self, rhs: &BoundedReal) -> Result<BoundedReal> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn square(&self) -> BoundedReal {
        if !self.lower.is_negative() {
            BoundedReal::new(&self.lower * &self.lower, &self.upper * &self.upper)
        } else if !self.upper.is_positive() {
            BoundedReal::new(&self.upper * &self.upper, &self.lower * &self.lower)
        } else {
            let hi = (&self.lower * &self.lower).max(&self.upper * &self.upper);
            BoundedReal::new(BigRational::zero(), hi)
        }
    }

    pub fn max(&self, rhs: &BoundedReal) -> BoundedReal {
        BoundedReal::new(
            self.lower.clone().max(rhs.lower.clone()),
            self.upper.clone().max(rhs.upper.clone()),
        )
    }

    pub fn min(&self, rhs: &BoundedReal) -> BoundedReal {
        BoundedReal::new(
            self.lower.clone().min(rhs.lower.clone()),
            self.upper.clone().min(rhs.upper.clone()),
        )
    }

    /// Square root; fails when the enclosure may be negative.
    pub fn sqrt(&self, bits: u32) -> Result<BoundedReal> {
        if self.lower.is_negative() {
            return Err(Error::NotApplicable("square root of a possibly negative quantity".into()));
        }
        let lo = root_bits(&self.lower, 2, bits).lower;
        let hi = root_bits(&self.upper, 2, bits).upper;
        Ok(BoundedReal::new(lo, hi))
    }

    /// Enlarges the enclosure to dyadic endpoints with `bits` fractional bits.
    pub fn round_outward(&self, bits: u32) -> BoundedReal {
        if self.is_exact() && self.lower.denom().bits() <= bits as u64 + 1 {
            return self.clone();
        }
        let scale = BigInt::one() << bits;
        let lo = (&self.lower * BigRational::from_integer(scale.clone())).floor().to_integer();
        let hi = (&self.upper * BigRational::from_integer(scale.clone())).ceil().to_integer();
        BoundedReal::new(
            BigRational::new(lo, scale.clone()),
            BigRational::new(hi, scale),
        )
    }

    pub fn lower_decimal(&self, places: u32) -> String {
        decimal_down(&self.lower, places)
    }

    pub fn upper_decimal(&self, places: u32) -> String {
        decimal_up(&self.upper, places)
    }
}

impl fmt::Display for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = f.precision().unwrap_or(6) as u32;
        write!(f, "[{}, {}]", decimal_down(&self.lower, places), decimal_up(&self.upper, places))
    }
}

/// Enclosure of `x^(1/k)` for `x >= 0` at the precision target. Exact when
/// numerator and denominator are perfect k-th powers.
pub fn nth_root_bounds(x: &BigRational, k: u32, prec: &Precision) -> BoundedReal {
    prec.tighten(|bits| root_bits(x, k, bits))
}

pub(crate) fn root_bits(x: &BigRational, k: u32, bits: u32) -> BoundedReal {
    assert!(k >= 1, "root index must be positive");
    assert!(!x.is_negative(), "root of a negative number");
    if x.is_zero() || k == 1 {
        return BoundedReal::exact(x.clone());
    }
    let num_root = x.numer().nth_root(k);
    let den_root = x.denom().nth_root(k);
    if num_root.pow(k) == *x.numer() && den_root.pow(k) == *x.denom() {
        return BoundedReal::exact(BigRational::new(num_root, den_root));
    }
    let scaled = (x.numer() << (bits as usize * k as usize)) / x.denom();
    let r = scaled.nth_root(k);
    let scale = BigInt::one() << bits;
    BoundedReal::new(
        BigRational::new(r.clone(), scale.clone()),
        BigRational::new(r + 1, scale),
    )
}

/// Which trigonometric quantity of the angle `pi/n` or `pi/(2n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigKind {
    SinPiOverN,
    CosPiOverN,
    TanPiOverN,
    CotPiOverN,
    TanPiOver2N,
    CotPiOver2N,
}

pub fn trig_bounds(kind: TrigKind, n: u64, prec: &Precision) -> Result<BoundedReal> {
    if n == 0 {
        return Err(Error::NotApplicable("angle denominator must be positive".into()));
    }
    match kind {
        TrigKind::SinPiOverN => Ok(prec.tighten(|bits| sin_pi_over(n, bits))),
        TrigKind::CosPiOverN => Ok(prec.tighten(|bits| cos_pi_over(n, bits))),
        TrigKind::TanPiOverN => prec.try_tighten(|bits| tan_pi_over(n, bits)),
        TrigKind::CotPiOverN => prec.try_tighten(|bits| cot_pi_over(n, bits)),
        TrigKind::TanPiOver2N => prec.try_tighten(|bits| tan_pi_over(2 * n, bits)),
        TrigKind::CotPiOver2N => prec.try_tighten(|bits| cot_pi_over(2 * n, bits)),
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Enclosure of pi via Machin's formula.
pub fn pi_bounds(bits: u32) -> BoundedReal {
    let a = atan_small(&ratio(1, 5), bits + 8);
    let b = atan_small(&ratio(1, 239), bits + 8);
    a.scale(&ratio(16, 1)).sub(&b.scale(&ratio(4, 1))).round_outward(bits + 4)
}

fn angle_pi_over(n: u64, bits: u32) -> BoundedReal {
    pi_bounds(bits + 4).scale(&BigRational::new(BigInt::one(), BigInt::from(n)))
}

pub(crate) fn sin_pi_over(n: u64, bits: u32) -> BoundedReal {
    match n {
        1 => return BoundedReal::zero(),
        2 => return BoundedReal::one(),
        6 => return BoundedReal::exact(ratio(1, 2)),
        _ => {}
    }
    // pi/n <= pi/3, where sine is increasing
    let x = angle_pi_over(n, bits);
    let lo = sin_series(&x.lower, bits + 8).lower;
    let hi = sin_series(&x.upper, bits + 8).upper;
    BoundedReal::new(lo, hi).round_outward(bits + 4)
}

pub(crate) fn cos_pi_over(n: u64, bits: u32) -> BoundedReal {
    match n {
        1 => return BoundedReal::exact(ratio(-1, 1)),
        2 => return BoundedReal::zero(),
        3 => return BoundedReal::exact(ratio(1, 2)),
        _ => {}
    }
    let x = angle_pi_over(n, bits);
    let lo = cos_series(&x.upper, bits + 8).lower;
    let hi = cos_series(&x.lower, bits + 8).upper;
    BoundedReal::new(lo, hi).round_outward(bits + 4)
}

pub(crate) fn tan_pi_over(n: u64, bits: u32) -> Result<BoundedReal> {
    match n {
        1 => return Ok(BoundedReal::zero()),
        2 => return Err(Error::NotApplicable("tan(pi/2) is undefined".into())),
        4 => return Ok(BoundedReal::one()),
        _ => {}
    }
    Ok(sin_pi_over(n, bits + 4).div(&cos_pi_over(n, bits + 4))?.round_outward(bits + 2))
}

pub(crate) fn cot_pi_over(n: u64, bits: u32) -> Result<BoundedReal> {
    match n {
        1 => return Err(Error::NotApplicable("cot(pi) is undefined".into())),
        2 => return Ok(BoundedReal::zero()),
        4 => return Ok(BoundedReal::one()),
        _ => {}
    }
    Ok(cos_pi_over(n, bits + 4).div(&sin_pi_over(n, bits + 4))?.round_outward(bits + 2))
}

/// Enclosure of `arctan` over an enclosure of its argument.
pub fn arctan_bounds(x: &BoundedReal, prec: &Precision) -> BoundedReal {
    prec.tighten(|bits| {
        let lo = atan_exact(&x.lower, bits).lower;
        let hi = atan_exact(&x.upper, bits).upper;
        BoundedReal::new(lo, hi)
    })
}

fn atan_exact(y: &BigRational, bits: u32) -> BoundedReal {
    if y.is_negative() {
        return atan_exact(&-y, bits).neg();
    }
    if y.is_zero() {
        return BoundedReal::zero();
    }
    let half = ratio(1, 2);
    if *y > BigRational::one() {
        let half_pi = pi_bounds(bits + 4).scale(&half);
        return half_pi.sub(&atan_exact(&y.recip(), bits)).round_outward(bits + 2);
    }
    if *y > half {
        let quarter_pi = pi_bounds(bits + 4).scale(&ratio(1, 4));
        let one = BigRational::one();
        let t = (y - &one) / (y + &one);
        return quarter_pi.add(&atan_small(&t, bits + 4)).round_outward(bits + 2);
    }
    atan_small(y, bits + 4).round_outward(bits + 2)
}

/// Lower and upper fixed-point values (scaled by `2^w`) of a real number.
#[derive(Clone)]
struct Fixed {
    lo: BigInt,
    hi: BigInt,
}

fn fixed_of(x: &BigRational, w: u32) -> Fixed {
    let scaled = x * BigRational::from_integer(BigInt::one() << w);
    Fixed { lo: scaled.floor().to_integer(), hi: scaled.ceil().to_integer() }
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Sums an alternating series `t_0 - t_1 + t_2 - ...` of non-negative terms
/// given in fixed point, where `next(k, term, up)` produces `t_{k+1}` from
/// `t_k` rounded in the requested direction. Terms must decrease from index
/// 1 onwards. Returns an enclosure of the full sum.
fn alternating_sum(
    first: Fixed,
    w: u32,
    bits: u32,
    next: impl Fn(i64, &BigInt, bool) -> BigInt,
) -> BoundedReal {
    let cutoff = BigInt::one() << (w.saturating_sub(bits + 4));
    let mut term = first;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut k: i64 = 0;
    loop {
        if k % 2 == 0 {
            lo += &term.lo;
            hi += &term.hi;
        } else {
            lo -= &term.hi;
            hi -= &term.lo;
        }
        let following = Fixed { lo: next(k, &term.lo, false), hi: next(k, &term.hi, true) };
        if k >= 1 && following.hi < cutoff {
            // remainder lies between 0 and the next signed term
            if k % 2 == 0 {
                lo -= &following.hi;
            } else {
                hi += &following.hi;
            }
            let scale = BigInt::one() << w;
            return BoundedReal::new(BigRational::new(lo, scale.clone()), BigRational::new(hi, scale));
        }
        term = following;
        k += 1;
    }
}

/// Alternating Taylor series of arctan for `|t| <= 1/2`.
fn atan_small(t: &BigRational, bits: u32) -> BoundedReal {
    if t.is_negative() {
        return atan_small(&-t, bits).neg();
    }
    if t.is_zero() {
        return BoundedReal::zero();
    }
    let w = bits + 16;
    // powers t^(2k+1) are tracked separately from the divided terms
    let x = fixed_of(t, w);
    let sq_lo = &x.lo * &x.lo;
    let sq_hi = &x.hi * &x.hi;
    let denom = BigInt::one() << (2 * w);
    let cutoff = BigInt::one() << (w.saturating_sub(bits + 4));
    let mut power = x;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut k: i64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        let term = Fixed { lo: div_floor(&power.lo, &d), hi: div_ceil(&power.hi, &d) };
        if k % 2 == 0 {
            lo += &term.lo;
            hi += &term.hi;
        } else {
            lo -= &term.hi;
            hi -= &term.lo;
        }
        power = Fixed {
            lo: div_floor(&(&power.lo * &sq_lo), &denom),
            hi: div_ceil(&(&power.hi * &sq_hi), &denom),
        };
        let next_hi = div_ceil(&power.hi, &BigInt::from(2 * k + 3));
        if next_hi < cutoff {
            if k % 2 == 0 {
                lo -= &next_hi;
            } else {
                hi += &next_hi;
            }
            let scale = BigInt::one() << w;
            return BoundedReal::new(BigRational::new(lo, scale.clone()), BigRational::new(hi, scale));
        }
        k += 1;
    }
}

/// Alternating Taylor series of sine for `0 <= x <= 2`.
fn sin_series(x: &BigRational, bits: u32) -> BoundedReal {
    debug_assert!(!x.is_negative() && *x <= ratio(2, 1));
    let w = bits + 16;
    let fx = fixed_of(x, w);
    let sq_lo = &fx.lo * &fx.lo;
    let sq_hi = &fx.hi * &fx.hi;
    let denom = BigInt::one() << (2 * w);
    alternating_sum(fx, w, bits, |k, t, up| {
        let d = &denom * BigInt::from((2 * k + 2) * (2 * k + 3));
        if up {
            div_ceil(&(t * &sq_hi), &d)
        } else {
            div_floor(&(t * &sq_lo), &d)
        }
    })
}

/// Alternating Taylor series of cosine for `0 <= x <= 2`.
fn cos_series(x: &BigRational, bits: u32) -> BoundedReal {
    debug_assert!(!x.is_negative() && *x <= ratio(2, 1));
    let w = bits + 16;
    let fx = fixed_of(x, w);
    let sq_lo = &fx.lo * &fx.lo;
    let sq_hi = &fx.hi * &fx.hi;
    let denom = BigInt::one() << (2 * w);
    let one = BigInt::one() << w;
    alternating_sum(Fixed { lo: one.clone(), hi: one }, w, bits, |k, t, up| {
        let d = &denom * BigInt::from((2 * k + 1) * (2 * k + 2));
        if up {
            div_ceil(&(t * &sq_hi), &d)
        } else {
            div_floor(&(t * &sq_lo), &d)
        }
    })
}

fn decimal_scaled(q: &BigRational, places: u32, round_up: bool) -> String {
    let scale = BigInt::from(10).pow(places);
    let scaled = q * BigRational::from_integer(scale.clone());
    let v = if round_up { scaled.ceil() } else { scaled.floor() }.to_integer();
    format_fixed(&v, places)
}

fn format_fixed(v: &BigInt, places: u32) -> String {
    let neg = v.sign() == Sign::Minus;
    let digits = v.abs().to_string();
    let places = places as usize;
    let body = if places == 0 {
        digits
    } else if digits.len() > places {
        format!("{}.{}", &digits[..digits.len() - places], &digits[digits.len() - places..])
    } else {
        format!("0.{}{}", "0".repeat(places - digits.len()), digits)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Decimal string rounded towards negative infinity.
pub fn decimal_down(q: &BigRational, places: u32) -> String {
    decimal_scaled(q, places, false)
}

/// Decimal string rounded towards positive infinity.
pub fn decimal_up(q: &BigRational, places: u32) -> String {
    decimal_scaled(q, places, true)
}

/// Exact value of a decimal string such as `-12.0625` or `3`.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let denom = BigInt::from(10).pow(frac_part.len() as u32);
    let v = BigRational::new(digits, denom);
    Some(if neg { -v } else { v })
}

/// Rational rendered as `a` or `a/b`.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => {
            if s.contains('.') {
                parse_decimal(s)
            } else {
                Some(BigRational::from_integer(s.parse().ok()?))
            }
        }
    }
}

/// Rounds to the nearest integer below, as a BigInt.
pub fn floor_int(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}
