//! Lens-shaped zero-free regions obtained by inverting the reciprocal's
//! sector, and the integer intervals they admit.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounded::{arctan_bounds, pi_bounds, trig_bounds, BoundedReal, Precision, TrigKind};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::sector::{best_sector, Sector};

/// `L_{v~, pi/n}`: the image of the reciprocal's sector `S_{v~, pi/n}` under
/// `z -> 1/z`, i.e. the intersection of two disks of radius
/// `1/(2 v~ sin(pi/n))` centered at `(1/(2 v~), +-cot(pi/n)/(2 v~))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lens {
    /// Exact value used for all lens computations (the upper bound of the
    /// reciprocal's sector vertex).
    pub v_tilde: BoundedReal,
    pub n: usize,
    pub reciprocal_sector: Sector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LensOutcome {
    Lens(Lens),
    /// The reciprocal's best sector has vertex 0, so `f` itself has no zero
    /// in `S_{0, pi/n}` and no bounded lens exists.
    HalfPlane(Sector),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Outside,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalSource {
    ThmDiskInLens,
    CorCot,
    CorEffective,
    Combined,
}

impl IntervalSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntervalSource::ThmDiskInLens => "thm_disk_in_lens",
            IntervalSource::CorCot => "cor_cot",
            IntervalSource::CorEffective => "cor_effective",
            IntervalSource::Combined => "combined",
        }
    }
}

/// Open interval `(lo, hi)` of admissible integers. Membership is decided
/// against `lo.upper` and `hi.lower`, so it implies the exact inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleInterval {
    pub lo: BoundedReal,
    pub hi: BoundedReal,
    pub source: IntervalSource,
    pub empty: bool,
}

impl AdmissibleInterval {
    fn new(lo: BoundedReal, hi: BoundedReal, source: IntervalSource) -> Self {
        let empty = lo.upper >= hi.lower;
        AdmissibleInterval { lo, hi, source, empty }
    }

    pub fn contains(&self, m: &BigInt) -> bool {
        let m = BigRational::from_integer(m.clone());
        !self.empty && m > self.lo.upper && m < self.hi.lower
    }

    /// Integers certainly inside the interval, as an inclusive range.
    pub fn integers(&self) -> Option<(BigInt, BigInt)> {
        if self.empty {
            return None;
        }
        let first = self.lo.upper.floor().to_integer() + 1;
        let last = -((-&self.hi.lower).floor().to_integer()) - 1;
        (first <= last).then_some((first, last))
    }
}

impl fmt::Display for AdmissibleInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "empty ({})", self.source.as_str());
        }
        write!(
            f,
            "({}, {}) [{}]",
            self.lo.upper_decimal(6),
            self.hi.lower_decimal(6),
            self.source.as_str()
        )
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn trig(kind: TrigKind, n: usize, prec: &Precision) -> BoundedReal {
    trig_bounds(kind, n as u64, prec).expect("angle denominator is at least 3")
}

/// Builds the lens of `f` from the best sector of its reciprocal. A negative
/// constant term is handled by working with `-f`, which has the same roots.
pub fn lens_of(f: &Polynomial, prec: &Precision) -> Result<LensOutcome> {
    if f.degree() < 3 {
        return Err(Error::DegreeTooLow { required: 3, found: f.degree() });
    }
    if f.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let mut rec = f.reciprocal()?;
    if rec.leading().is_negative() {
        rec = -&rec;
    }
    let sector = best_sector(&rec, None, prec)?.best;
    if sector.vertex.upper.is_zero() {
        return Ok(LensOutcome::HalfPlane(sector));
    }
    Ok(LensOutcome::Lens(Lens {
        v_tilde: BoundedReal::exact(sector.vertex.upper.clone()),
        n: f.degree(),
        reciprocal_sector: sector,
    }))
}

impl Lens {
    /// Lens with a given `v~ > 0`, without an underlying polynomial.
    pub fn with_vertex(v_tilde: BigRational, n: usize) -> Result<Lens> {
        if !v_tilde.is_positive() {
            return Err(Error::DegenerateLens);
        }
        if n < 3 {
            return Err(Error::DegreeTooLow { required: 3, found: n });
        }
        let vertex = BoundedReal::exact(v_tilde);
        let sector = Sector {
            vertex: vertex.clone(),
            n,
            half_angle: crate::sector::HalfAngle::PiOverN,
            method: crate::sector::SectorMethod::Parametrized,
            alpha: None,
        };
        Ok(Lens { v_tilde: vertex, n, reciprocal_sector: sector })
    }

    fn vt(&self) -> &BigRational {
        &self.v_tilde.upper
    }

    /// Right tip `1/v~` of the lens.
    pub fn tip(&self) -> BigRational {
        self.vt().recip()
    }

    pub fn center_x(&self) -> BigRational {
        self.tip() * half()
    }

    pub fn radius(&self, prec: &Precision) -> BoundedReal {
        let s = trig(TrigKind::SinPiOverN, self.n, prec);
        s.scale(&(self.vt() * BigRational::from_integer(2.into())))
            .recip()
            .expect("sine of pi/n is positive")
    }

    pub fn center_offset(&self, prec: &Precision) -> BoundedReal {
        trig(TrigKind::CotPiOverN, self.n, prec).scale(&self.center_x())
    }

    /// Upper half of the boundary curve at abscissa `x`, in floating point.
    pub fn boundary_f64(&self, x: f64) -> Option<f64> {
        let vt = self.vt().to_f64()?;
        let theta = std::f64::consts::PI / self.n as f64;
        let h = 0.5 / vt;
        let r2 = 1.0 / (4.0 * vt * vt * theta.sin().powi(2)) - (x - h).powi(2);
        if x <= 0.0 || x >= 1.0 / vt || r2 < 0.0 {
            return None;
        }
        let y = -h / theta.tan() + r2.sqrt();
        (y >= 0.0).then_some(y)
    }

    /// Whether `x + iy` lies in the open lens. The point is inside exactly
    /// when `(x - h)^2 + y^2 + |y| cot(pi/n) / v~ - h^2 < 0` with `h = 1/(2 v~)`.
    pub fn contains(&self, x: &BigRational, y: &BigRational, prec: &Precision) -> Containment {
        let h = self.center_x();
        let exact_part = (x - &h) * (x - &h) + y * y - &h * &h;
        let cot = trig(TrigKind::CotPiOverN, self.n, prec);
        let d = BoundedReal::exact(exact_part).add(&cot.scale(&(y.abs() / self.vt())));
        if d.upper.is_negative() {
            Containment::Inside
        } else if !d.lower.is_negative() {
            Containment::Outside
        } else {
            Containment::Undecided
        }
    }

    fn require_disk_precondition(&self, prec: &Precision) -> Result<()> {
        let bound = trig(TrigKind::TanPiOver2N, self.n, prec).scale(&half());
        if *self.vt() < bound.lower {
            Ok(())
        } else {
            Err(Error::LensPrecondition(format!(
                "v~ = {} is not below tan(pi/{})/2",
                self.v_tilde.upper_decimal(8),
                2 * self.n
            )))
        }
    }
}

pub fn lens_contains(lens: &Lens, x: &BigRational, y: &BigRational, prec: &Precision) -> Containment {
    lens.contains(x, y, prec)
}

/// Angle `alpha = pi/n - arctan(sin(pi/n) / sqrt(1/(v v~) - sin^2(pi/n)))`
/// with `S_{0,alpha}` inside `S_{v,pi/n}` together with `L_{v~,pi/n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionAngle {
    pub alpha: BoundedReal,
    pub n: usize,
}

pub fn union_angle(v: &BoundedReal, v_tilde: &BoundedReal, n: usize, prec: &Precision) -> Result<UnionAngle> {
    if n < 2 {
        return Err(Error::DegreeTooLow { required: 2, found: n });
    }
    let product = v.mul(v_tilde);
    if product.upper >= BigRational::one() {
        return Err(Error::NotApplicable("union angle needs v * v~ < 1".into()));
    }
    if !product.lower.is_positive() {
        return Err(Error::NotApplicable("union angle needs v, v~ > 0".into()));
    }
    let work = Precision::new(prec.digits() + 6);
    let sin = trig(TrigKind::SinPiOverN, n, &work);
    let radicand = product.recip()?.sub(&sin.square());
    if !radicand.lower.is_positive() {
        return Err(Error::NotApplicable("union angle radicand is not positive".into()));
    }
    let ratio = sin.div(&radicand.sqrt(work.bits())?)?;
    let atan = arctan_bounds(&ratio, &work);
    let pi_n = pi_bounds(work.bits()).scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
    Ok(UnionAngle { alpha: pi_n.sub(&atan), n })
}

/// `(1/(2 v~) - delta, 1/(2 v~) + delta)` with
/// `delta = sqrt(1 + 1/(4 v~^2) - 1/(v~ sin(pi/n)))`.
pub fn interval_disk_in_lens(lens: &Lens, prec: &Precision) -> Result<AdmissibleInterval> {
    lens.require_disk_precondition(prec)?;
    let h = lens.center_x();
    let sin = trig(TrigKind::SinPiOverN, lens.n, prec);
    let d2 = BoundedReal::exact(BigRational::one() + &h * &h)
        .sub(&sin.scale(lens.vt()).recip()?);
    let center = BoundedReal::exact(h);
    if !d2.lower.is_positive() {
        return Ok(AdmissibleInterval::new(center.clone(), center, IntervalSource::ThmDiskInLens));
    }
    let delta = d2.sqrt(prec.bits())?;
    Ok(AdmissibleInterval::new(center.sub(&delta), center.add(&delta), IntervalSource::ThmDiskInLens))
}

/// `(cot(pi/(2n)), 1/v~ - cot(pi/(2n)))`.
pub fn interval_cot(lens: &Lens, prec: &Precision) -> Result<AdmissibleInterval> {
    lens.require_disk_precondition(prec)?;
    let c = trig(TrigKind::CotPiOver2N, lens.n, prec);
    let hi = BoundedReal::exact(lens.tip()).sub(&c);
    Ok(AdmissibleInterval::new(c, hi, IntervalSource::CorCot))
}

/// `(2n/pi, 1/v~ - 2n/pi)`, valid for `v~ < pi/(4n)`.
pub fn interval_effective(lens: &Lens, prec: &Precision) -> Result<AdmissibleInterval> {
    let pi = prec.tighten(pi_bounds);
    let n = BigRational::from_integer(BigInt::from(lens.n));
    let limit = pi.lower.clone() / (BigRational::from_integer(4.into()) * &n);
    if *lens.vt() >= limit {
        return Err(Error::LensPrecondition(format!(
            "v~ = {} is not below pi/{}",
            lens.v_tilde.upper_decimal(8),
            4 * lens.n
        )));
    }
    let two_n = &n * BigRational::from_integer(2.into());
    let c = BoundedReal::new(&two_n / &pi.upper, &two_n / &pi.lower);
    let hi = BoundedReal::exact(lens.tip()).sub(&c);
    Ok(AdmissibleInterval::new(c, hi, IntervalSource::CorEffective))
}

/// Integers `m` covered by the sector's disk ray `m > v + 1/sin(pi/n)` or by
/// the lens's cot interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinedRegion {
    pub intervals: Vec<AdmissibleInterval>,
    pub ray_lo: BoundedReal,
    pub notes: Vec<String>,
}

impl CombinedRegion {
    pub fn contains(&self, m: &BigInt) -> bool {
        BigRational::from_integer(m.clone()) > self.ray_lo.upper || self.intervals.iter().any(|i| i.contains(m))
    }

    pub fn ray_contains(&self, m: &BigInt) -> bool {
        BigRational::from_integer(m.clone()) > self.ray_lo.upper
    }
}

pub fn combined_region(sector: &Sector, lens: Option<&Lens>, prec: &Precision) -> CombinedRegion {
    let sin = trig(TrigKind::SinPiOverN, sector.n.max(2), prec);
    let mut ray_lo = BoundedReal::exact(sector.vertex.upper.clone())
        .add(&sin.recip().expect("sine of pi/n is positive"));
    let mut notes = Vec::new();
    let mut intervals = Vec::new();
    match lens.map(|l| interval_cot(l, prec)) {
        None => notes.push("no lens; ray only".to_string()),
        Some(Err(e)) => notes.push(format!("lens part dropped: {e}")),
        Some(Ok(iv)) if iv.empty => notes.push("cot interval is empty".to_string()),
        Some(Ok(iv)) => {
            if iv.lo.upper >= ray_lo.upper {
                notes.push("cot interval lies inside the ray".to_string());
            } else if ray_lo.upper < iv.hi.lower {
                notes.push("cot interval overlaps the ray; region is a single ray".to_string());
                ray_lo = iv.lo.clone();
            } else {
                intervals.push(AdmissibleInterval { source: IntervalSource::Combined, ..iv });
            }
        }
    }
    CombinedRegion { intervals, ray_lo, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn prec() -> Precision {
        Precision::default()
    }

    fn lo_f(i: &AdmissibleInterval) -> f64 {
        i.lo.upper.to_f64().unwrap()
    }

    fn hi_f(i: &AdmissibleInterval) -> f64 {
        i.hi.lower.to_f64().unwrap()
    }

    fn flagship() -> Lens {
        match lens_of(&Polynomial::from_i64(&[2162, 0, 0, -10, 1]), &prec()).unwrap() {
            LensOutcome::Lens(l) => l,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flagship_lens() {
        let l = flagship();
        assert!((l.v_tilde.upper.to_f64().unwrap() - 0.166_61).abs() < 1e-5);
        assert_eq!(l.n, 4);
        let d = interval_disk_in_lens(&l, &prec()).unwrap();
        assert!((lo_f(&d) - 1.768_994_141).abs() < 1e-9 && (hi_f(&d) - 4.232_857_139).abs() < 1e-9, "{d}");
        assert!(d.contains(&3.into()));
        let c = interval_cot(&l, &prec()).unwrap();
        assert!((lo_f(&c) - 2.414_213_562).abs() < 1e-9 && (hi_f(&c) - 3.587_637_718).abs() < 1e-9, "{c}");
        assert_eq!(c.integers(), Some((3.into(), 3.into())));
    }

    #[test]
    fn lens_rejections() {
        assert_eq!(lens_of(&Polynomial::from_i64(&[1, 1, 1]), &prec()), Err(Error::DegreeTooLow { required: 3, found: 2 }));
        assert_eq!(lens_of(&Polynomial::from_i64(&[0, 1, 1, 1]), &prec()), Err(Error::ZeroConstantTerm));
        assert!(matches!(lens_of(&Polynomial::from_i64(&[4, 2, 2, 1]), &prec()), Ok(LensOutcome::HalfPlane(_))));
        assert_eq!(Lens::with_vertex(q(0, 1), 4), Err(Error::DegenerateLens));
    }

    #[test]
    fn negative_constant_term_is_normalized() {
        let f = Polynomial::from_i64(&[-2162, 0, 0, 10, -1]);
        let g = Polynomial::from_i64(&[2162, 0, 0, -10, 1]);
        let (LensOutcome::Lens(a), LensOutcome::Lens(b)) = (lens_of(&-&f, &prec()).unwrap(), lens_of(&g, &prec()).unwrap()) else {
            panic!()
        };
        assert_eq!(a.v_tilde, b.v_tilde);
        let f = Polynomial::from_i64(&[-1, 5, 0, 3]);
        assert!(lens_of(&f, &prec()).is_ok());
    }

    #[test]
    fn containment() {
        let l = flagship();
        assert_eq!(l.contains(&l.center_x(), &q(0, 1), &prec()), Containment::Inside);
        assert_eq!(l.contains(&(l.tip() + q(1, 1)), &q(0, 1), &prec()), Containment::Outside);
        assert_eq!(l.contains(&l.tip(), &q(0, 1), &prec()), Containment::Outside);
        let y = l.boundary_f64(l.center_x().to_f64().unwrap()).unwrap();
        let above = BigRational::from_float(y * (1.0 + 1e-12)).unwrap();
        assert_ne!(l.contains(&l.center_x(), &above, &prec()), Containment::Inside);
        let below = BigRational::from_float(y * (1.0 - 1e-9)).unwrap();
        assert_eq!(l.contains(&l.center_x(), &below, &prec()), Containment::Inside);
    }

    #[test]
    fn cot_and_effective_examples() {
        let l = Lens::with_vertex(q(1, 10), 3).unwrap();
        let c = interval_cot(&l, &prec()).unwrap();
        assert!((lo_f(&c) - 3f64.sqrt()).abs() < 1e-10 && (hi_f(&c) - (10.0 - 3f64.sqrt())).abs() < 1e-10);
        let l = Lens::with_vertex(q(1, 10), 4).unwrap();
        let e = interval_effective(&l, &prec()).unwrap();
        let c = 8.0 / std::f64::consts::PI;
        assert!((lo_f(&e) - c).abs() < 1e-10 && (hi_f(&e) - (10.0 - c)).abs() < 1e-10);
        let cot = interval_cot(&l, &prec()).unwrap();
        assert!(e.lo.upper >= cot.lo.upper && e.hi.lower <= cot.hi.lower);
    }

    #[test]
    fn preconditions_are_strict() {
        // (1/2) tan(pi/8) = (sqrt 2 - 1)/2 ~ 0.2071
        assert!(interval_cot(&Lens::with_vertex(q(21, 100), 4).unwrap(), &prec()).is_err());
        assert!(interval_cot(&Lens::with_vertex(q(20, 100), 4).unwrap(), &prec()).is_ok());
        // pi/16 ~ 0.196350
        assert!(interval_effective(&Lens::with_vertex(q(19634, 100000), 4).unwrap(), &prec()).is_ok());
        assert!(interval_effective(&Lens::with_vertex(q(19636, 100000), 4).unwrap(), &prec()).is_err());
        // b = 216a gives v~ = 1/6 < (sqrt 2 - 1)/2
        let f = Polynomial::from_i64(&[2160, 0, 0, -10, 1]);
        let LensOutcome::Lens(l) = lens_of(&f, &prec()).unwrap() else { panic!() };
        assert_eq!(l.v_tilde, BoundedReal::exact(q(1, 6)));
        assert!(interval_cot(&l, &prec()).is_ok());
    }

    #[test]
    fn union_angle_examples() {
        let tiny = BoundedReal::exact(q(1, 1_000_000));
        let a = union_angle(&tiny, &tiny, 4, &prec()).unwrap();
        assert!((a.alpha.midpoint_f64() - std::f64::consts::FRAC_PI_4).abs() < 1e-3);
        assert!(union_angle(&BoundedReal::one(), &BoundedReal::one(), 4, &prec()).is_err());
        let l = flagship();
        assert!(union_angle(&BoundedReal::from_integer(10), &l.v_tilde, 4, &prec()).is_err());
        let a = union_angle(&BoundedReal::exact(q(1, 2)), &BoundedReal::exact(q(1, 2)), 5, &prec()).unwrap();
        let theta = std::f64::consts::PI / 5.0;
        let expect = theta - (theta.sin() / (4.0 - theta.sin().powi(2)).sqrt()).atan();
        assert!((a.alpha.midpoint_f64() - expect).abs() < 1e-12);
    }

    #[test]
    fn combined_flagship() {
        let f = Polynomial::from_i64(&[2162, 0, 0, -10, 1]);
        let sector = best_sector(&f, None, &prec()).unwrap().best;
        let l = flagship();
        let r = combined_region(&sector, Some(&l), &prec());
        assert_eq!(r.intervals.len(), 1);
        assert!((r.ray_lo.upper.to_f64().unwrap() - (10.0 + 2f64.sqrt())).abs() < 1e-9);
        assert!(r.contains(&3.into()) && !r.contains(&4.into()) && !r.contains(&11.into()) && r.contains(&12.into()));
    }

    #[test]
    fn combined_simplifications() {
        // v <= cot(pi/n): the cot interval sits inside the ray
        let l = Lens::with_vertex(q(1, 100), 4).unwrap();
        let s = Lens::with_vertex(q(1, 2), 4).unwrap().reciprocal_sector;
        let r = combined_region(&s, Some(&l), &prec());
        assert!(r.intervals.is_empty());
        assert!((r.ray_lo.upper.to_f64().unwrap() - (0.5 + 2f64.sqrt())).abs() < 1e-9);
        // v between cot(pi/n) and 1/v~ - cot(pi/2n) - 1/sin(pi/n): single ray from cot(pi/2n)
        let s = Lens::with_vertex(q(3, 1), 4).unwrap().reciprocal_sector;
        let r = combined_region(&s, Some(&l), &prec());
        assert!(r.intervals.is_empty());
        assert!((r.ray_lo.upper.to_f64().unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-9);
    }
}
