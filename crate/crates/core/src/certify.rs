//! Irreducibility certificates: a zero-free region, an integer `m` far enough
//! inside it, and a factorization of `f(m)` that a proper factor of `f`
//! could not accommodate.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{extract_witness, has_rational_root, FactorizationWitness, PrimalityStatus, WitnessMode};
use crate::bounded::{decimal_down, decimal_up, nth_root_bounds, parse_decimal, rational_string, trig_bounds};
use crate::bounded::{BoundedReal, Precision, TrigKind};
use crate::error::{Error, Result};
use crate::lens::{
    combined_region, interval_cot, interval_disk_in_lens, lens_of, AdmissibleInterval, Lens, LensOutcome,
};
use crate::poly::Polynomial;
use crate::sector::{best_sector, Sector, SectorMethod, SectorReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "thm31_pq")]
    Thm31Pq,
    #[serde(rename = "thm31_sqrt_q")]
    Thm31SqrtQ,
    #[serde(rename = "thm35_prime_power")]
    Thm35PrimePower,
    #[serde(rename = "thm35_sqrt")]
    Thm35Sqrt,
    #[serde(rename = "thm39_lens")]
    Thm39Lens,
    #[serde(rename = "cor310_cot")]
    Cor310Cot,
    #[serde(rename = "cor312_combined")]
    Cor312Combined,
    #[serde(rename = "cor32_nonneg")]
    Cor32Nonneg,
    #[serde(rename = "cor34_partial_sums")]
    Cor34PartialSums,
    #[serde(rename = "cor35_fujiwara")]
    Cor35Fujiwara,
    #[serde(rename = "cor38_single_variation")]
    Cor38SingleVariation,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::Thm31Pq => "thm31_pq",
            Criterion::Thm31SqrtQ => "thm31_sqrt_q",
            Criterion::Thm35PrimePower => "thm35_prime_power",
            Criterion::Thm35Sqrt => "thm35_sqrt",
            Criterion::Thm39Lens => "thm39_lens",
            Criterion::Cor310Cot => "cor310_cot",
            Criterion::Cor312Combined => "cor312_combined",
            Criterion::Cor32Nonneg => "cor32_nonneg",
            Criterion::Cor34PartialSums => "cor34_partial_sums",
            Criterion::Cor35Fujiwara => "cor35_fujiwara",
            Criterion::Cor38SingleVariation => "cor38_single_variation",
        }
    }

    /// The certification routine that issues this criterion.
    pub fn family(&self) -> Family {
        match self {
            Criterion::Thm35PrimePower | Criterion::Thm35Sqrt => Family::PrimePower,
            Criterion::Thm39Lens | Criterion::Cor310Cot => Family::Lens,
            Criterion::Cor312Combined => Family::Combined,
            _ => Family::SectorPq,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lens,
    SectorPq,
    PrimePower,
    Combined,
}

impl Family {
    pub const DEFAULT_ORDER: [Family; 3] = [Family::Lens, Family::SectorPq, Family::PrimePower];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorRecord {
    pub vertex_upper: String,
    pub vertex_lower: String,
    pub angle: String,
    pub n: usize,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
}

impl SectorRecord {
    fn of(s: &Sector, places: u32) -> Self {
        SectorRecord {
            vertex_upper: s.vertex.upper_decimal(places),
            vertex_lower: s.vertex.lower_decimal(places),
            angle: s.half_angle.label().to_string(),
            n: s.n,
            method: s.method.as_str().to_string(),
            alpha: s.alpha.as_ref().map(rational_string),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensRecord {
    pub v_tilde_upper: String,
    pub v_tilde_lower: String,
    pub n: usize,
    pub reciprocal: SectorRecord,
}

impl LensRecord {
    fn of(l: &Lens, places: u32) -> Self {
        LensRecord {
            v_tilde_upper: l.v_tilde.upper_decimal(places),
            v_tilde_lower: l.v_tilde.lower_decimal(places),
            n: l.n,
            reciprocal: SectorRecord::of(&l.reciprocal_sector, places),
        }
    }
}

/// An admissible interval as `(lo, hi)`, with `lo` rounded up and `hi`
/// rounded down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub lo: String,
    pub hi: String,
    pub source: String,
}

impl IntervalRecord {
    fn of(i: &AdmissibleInterval, places: u32) -> Self {
        IntervalRecord {
            lo: i.lo.upper_decimal(places),
            hi: i.hi.lower_decimal(places),
            source: i.source.as_str().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionRecord {
    Sector {
        sector: SectorRecord,
    },
    Lens {
        lens: LensRecord,
        interval: IntervalRecord,
        cross_check: IntervalRecord,
    },
    Combined {
        sector: SectorRecord,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lens: Option<LensRecord>,
        intervals: Vec<IntervalRecord>,
        ray_lo: String,
        branch: String,
    },
}

impl RegionRecord {
    /// Recorded enclosures of the region parameters, as `(lower, upper)`.
    fn enclosures(&self) -> Vec<(String, String)> {
        let sector = |s: &SectorRecord| (s.vertex_lower.clone(), s.vertex_upper.clone());
        // v~ is itself a rounded-up bound; pair it with the true vertex's lower end
        let lens = |l: &LensRecord| (l.reciprocal.vertex_lower.clone(), l.v_tilde_upper.clone());
        match self {
            RegionRecord::Sector { sector: s } => vec![sector(s)],
            RegionRecord::Lens { lens: l, .. } => vec![lens(l)],
            RegionRecord::Combined { sector: s, lens: l, .. } => {
                let mut out = vec![sector(s)];
                out.extend(l.iter().map(lens));
                out
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub p: String,
    pub k: u32,
    pub q: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
}

impl WitnessRecord {
    fn of(w: &FactorizationWitness) -> Self {
        WitnessRecord {
            p: w.p.to_string(),
            k: w.k,
            q: w.q.to_string(),
            ell: w.ell,
            r: w.r.as_ref().map(ToString::to_string),
            s: w.s.as_ref().map(rational_string),
        }
    }
}

/// The inequality `left > right`; `left` is rounded down, `right` up, and
/// `margin` is their exact difference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub description: String,
    pub left: String,
    pub right: String,
    pub margin: String,
}

impl Check {
    fn new(description: impl Into<String>, left: &BigRational, right: &BigRational, places: u32) -> Self {
        let l = decimal_down(left, places);
        let r = decimal_up(right, places);
        let margin = parse_decimal(&l).expect("own decimal") - parse_decimal(&r).expect("own decimal");
        Check { description: description.into(), left: l, right: r, margin: decimal_down(&margin, places) }
    }

    pub fn passes(&self) -> bool {
        parse_decimal(&self.margin).is_some_and(|m| m.is_positive())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimalityRecord {
    pub status: PrimalityStatus,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    /// Coefficients `a_0, ..., a_n` as decimal strings.
    pub polynomial: Vec<String>,
    pub m: String,
    /// Set when `f(-X)` (up to sign) was certified at `-m`.
    pub argument_negated: bool,
    /// Value of the certified polynomial at its argument.
    pub value: String,
    pub criterion: Criterion,
    pub region: RegionRecord,
    pub witness: WitnessRecord,
    pub checks: Vec<Check>,
    pub primality: PrimalityRecord,
    pub conditional: bool,
    pub digits: u32,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::MalformedCertificate(e.to_string()))?;
        match raw.get("schema").and_then(|s| s.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => return Err(Error::MalformedCertificate(format!("unsupported schema version {v}"))),
            None => return Err(Error::MalformedCertificate("missing schema version".into())),
        }
        serde_json::from_value(raw).map_err(|e| Error::MalformedCertificate(e.to_string()))
    }

    pub fn polynomial(&self) -> Result<Polynomial> {
        let coeffs = self
            .polynomial
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(|_| Error::MalformedCertificate(format!("bad coefficient {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::new(coeffs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectKind {
    ValueComposite,
    OutsideRegion,
    WitnessAbsent,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub kind: RejectKind,
    pub detail: String,
}

impl Rejection {
    fn new(kind: RejectKind, detail: impl Into<String>) -> Self {
        Rejection { kind, detail: detail.into() }
    }
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            RejectKind::ValueComposite => "value composite",
            RejectKind::OutsideRegion => "outside region",
            RejectKind::WitnessAbsent => "witness absent",
            RejectKind::NotApplicable => "not applicable",
        };
        write!(f, "{kind}: {}", self.detail)
    }
}

pub type Attempt = std::result::Result<Certificate, Rejection>;

struct SectorSetup {
    report: SectorReport,
    /// Upper bound of `1/sin(pi/n)`.
    inv_sin: BigRational,
    sign_changes: usize,
}

struct LensSetup {
    lens: Lens,
    disk: AdmissibleInterval,
    cot: AdmissibleInterval,
    half_tan: BoundedReal,
}

/// Per-polynomial state shared by all certification attempts: the best
/// sector, the lens and its intervals are computed once.
pub struct Certifier {
    original: Polynomial,
    f: Polynomial,
    negated: bool,
    prec: Precision,
    sector: std::result::Result<SectorSetup, String>,
    lens: std::result::Result<LensSetup, String>,
    rational_root: OnceLock<Result<Option<BigRational>>>,
}

impl Certifier {
    pub fn new(f: &Polynomial, prec: Precision) -> Self {
        Self::build(f.clone(), f.clone(), false, prec)
    }

    /// Certifier for negative arguments: works with `+-f(-X)` (sign chosen so
    /// the leading coefficient is positive) at `-m`.
    pub fn negated(f: &Polynomial, prec: Precision) -> Self {
        let mut g = f.negate_argument();
        if g.leading().is_negative() {
            g = -&g;
        }
        Self::build(f.clone(), g, true, prec)
    }

    fn build(original: Polynomial, f: Polynomial, negated: bool, prec: Precision) -> Self {
        let sector = Self::sector_setup(&f, &prec);
        let lens = Self::lens_setup(&f, &prec);
        Certifier { original, f, negated, prec, sector, lens, rational_root: OnceLock::new() }
    }

    fn sector_setup(f: &Polynomial, prec: &Precision) -> std::result::Result<SectorSetup, String> {
        if f.degree() < 2 {
            return Err(format!("degree {} is below 2", f.degree()));
        }
        if !f.leading().is_positive() {
            return Err("leading coefficient must be positive".into());
        }
        let report = best_sector(f, None, prec).map_err(|e| e.to_string())?;
        let sin = trig_bounds(TrigKind::SinPiOverN, f.degree() as u64, prec).map_err(|e| e.to_string())?;
        let sign_changes = f.sign_blocks().map(|p| p.sign_changes).unwrap_or(0);
        Ok(SectorSetup { report, inv_sin: sin.lower.recip(), sign_changes })
    }

    fn lens_setup(f: &Polynomial, prec: &Precision) -> std::result::Result<LensSetup, String> {
        let lens = match lens_of(f, prec).map_err(|e| e.to_string())? {
            LensOutcome::Lens(l) => l,
            LensOutcome::HalfPlane(_) => return Err("reciprocal sector has vertex 0; no bounded lens".into()),
        };
        let disk = interval_disk_in_lens(&lens, prec).map_err(|e| e.to_string())?;
        let cot = interval_cot(&lens, prec).map_err(|e| e.to_string())?;
        let half_tan = trig_bounds(TrigKind::TanPiOver2N, lens.n as u64, prec)
            .map_err(|e| e.to_string())?
            .scale(&BigRational::new(1.into(), 2.into()));
        Ok(LensSetup { lens, disk, cot, half_tan })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.original
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn sector_report(&self) -> Option<&SectorReport> {
        self.sector.as_ref().ok().map(|s| &s.report)
    }

    pub fn best_sector(&self) -> Option<&Sector> {
        self.sector_report().map(|r| &r.best)
    }

    pub fn lens(&self) -> Option<&Lens> {
        self.lens.as_ref().ok().map(|l| &l.lens)
    }

    pub fn lens_intervals(&self) -> Option<(&AdmissibleInterval, &AdmissibleInterval)> {
        self.lens.as_ref().ok().map(|l| (&l.disk, &l.cot))
    }

    fn places(&self) -> u32 {
        self.prec.decimal_places()
    }

    fn rational_root(&self) -> &Result<Option<BigRational>> {
        self.rational_root.get_or_init(|| has_rational_root(&self.f))
    }

    /// Positive argument for the working polynomial.
    fn internal_m(&self, m: &BigInt) -> std::result::Result<BigInt, Rejection> {
        let mi = if self.negated { -m } else { m.clone() };
        if mi < BigInt::one() {
            let why = if self.negated { "negative-argument mode needs m <= -1" } else { "m must be at least 1" };
            return Err(Rejection::new(RejectKind::NotApplicable, why));
        }
        Ok(mi)
    }

    fn positive_value(&self, mi: &BigInt) -> std::result::Result<BigInt, Rejection> {
        let value = self.f.evaluate(mi);
        if value.is_positive() {
            Ok(value)
        } else {
            Err(Rejection::new(RejectKind::NotApplicable, format!("f(m) = {value} is not positive")))
        }
    }

    fn prime_value(&self, mi: &BigInt) -> std::result::Result<(BigInt, FactorizationWitness), Rejection> {
        let value = self.positive_value(mi)?;
        match extract_witness(&value, &BigInt::zero(), 1, WitnessMode::Pq) {
            Ok(Some(w)) => Ok((value, w)),
            _ => Err(Rejection::new(RejectKind::ValueComposite, format!("f(m) = {value} is not prime"))),
        }
    }

    fn sector_ready(&self) -> std::result::Result<&SectorSetup, Rejection> {
        self.sector.as_ref().map_err(|e| Rejection::new(RejectKind::NotApplicable, e.clone()))
    }

    fn lens_ready(&self) -> std::result::Result<&LensSetup, Rejection> {
        self.lens.as_ref().map_err(|e| Rejection::new(RejectKind::NotApplicable, e.clone()))
    }

    /// `v + c / sin(pi/n)` rounded up, for an upper bound `c`.
    fn threshold(&self, setup: &SectorSetup, c: &BigRational) -> BigRational {
        &setup.report.best.vertex.upper + c * &setup.inv_sin
    }

    fn early_region_check(&self, setup: &SectorSetup, mi: &BigInt) -> std::result::Result<(), Rejection> {
        let t = self.threshold(setup, &BigRational::one());
        if BigRational::from_integer(mi.clone()) > t {
            Ok(())
        } else {
            Err(Rejection::new(
                RejectKind::OutsideRegion,
                format!("m <= v + 1/sin(pi/n) ~ {}", decimal_up(&t, 6)),
            ))
        }
    }

    fn no_rational_root(&self) -> bool {
        matches!(self.rational_root(), Ok(None))
    }

    fn finish(
        &self,
        m: &BigInt,
        value: &BigInt,
        criterion: Criterion,
        region: RegionRecord,
        witness: &FactorizationWitness,
        checks: Vec<Check>,
    ) -> Attempt {
        if let Some(bad) = checks.iter().find(|c| !c.passes()) {
            return Err(Rejection::new(RejectKind::OutsideRegion, format!("check failed: {}", bad.description)));
        }
        Ok(Certificate {
            schema: SCHEMA_VERSION,
            polynomial: self.original.coeffs().iter().map(ToString::to_string).collect(),
            m: m.to_string(),
            argument_negated: self.negated,
            value: value.to_string(),
            criterion,
            region,
            witness: WitnessRecord::of(witness),
            checks,
            primality: PrimalityRecord { status: witness.primality.status, method: witness.primality.method.clone() },
            conditional: witness.conditional(),
            digits: self.prec.digits(),
        })
    }

    fn sector_tag(&self, setup: &SectorSetup) -> Criterion {
        let best = &setup.report.best;
        match best.method {
            SectorMethod::Nonneg => Criterion::Cor32Nonneg,
            SectorMethod::Shifted if best.alpha.as_ref().is_some_and(|a| a.is_one()) => Criterion::Cor34PartialSums,
            SectorMethod::NegSum
                if self.f.sign_index_sets().is_ok_and(|s| self.f.leading() > s.neg_sum_abs) =>
            {
                Criterion::Cor35Fujiwara
            }
            SectorMethod::SummedDenominator | SectorMethod::SignBlocks
                if setup.sign_changes == 1 && best.vertex.upper.is_one() =>
            {
                Criterion::Cor38SingleVariation
            }
            _ => Criterion::Thm31Pq,
        }
    }

    /// `f(m) = p q` with `m > v + q/sin(pi/n)`, or `m > v + sqrt(q)/sin(pi/n)`
    /// when `f` has no rational root.
    pub fn certify_sector_pq(&self, m: &BigInt, q_max: u64) -> Attempt {
        let setup = self.sector_ready()?;
        let mi = self.internal_m(m)?;
        self.early_region_check(setup, &mi)?;
        let value = self.positive_value(&mi)?;
        let witness = match extract_witness(&value, &BigInt::zero(), q_max.max(1), WitnessMode::Pq) {
            Ok(Some(w)) => w,
            _ if q_max <= 1 => {
                return Err(Rejection::new(RejectKind::ValueComposite, format!("f(m) = {value} is not prime")))
            }
            _ => {
                return Err(Rejection::new(
                    RejectKind::WitnessAbsent,
                    format!("f(m) = {value} is not p*q with q <= {q_max}"),
                ))
            }
        };
        let places = self.places();
        let m_rat = BigRational::from_integer(mi.clone());
        let q = BigRational::from_integer(witness.q.clone());
        let region = RegionRecord::Sector { sector: SectorRecord::of(&setup.report.best, places) };
        let full = self.threshold(setup, &q);
        if m_rat > full {
            let check = Check::new("m > v + q/sin(pi/n)", &m_rat, &full, places);
            let tag = if witness.q.is_one() { self.sector_tag(setup) } else { Criterion::Thm31Pq };
            return self.finish(m, &value, tag, region, &witness, vec![check]);
        }
        if !self.no_rational_root() {
            return Err(Rejection::new(
                RejectKind::OutsideRegion,
                format!("m <= v + q/sin(pi/n) ~ {} and f may have a rational root", decimal_up(&full, 6)),
            ));
        }
        let sqrt_q = nth_root_bounds(&q, 2, &self.prec).upper;
        let reduced = self.threshold(setup, &sqrt_q);
        let check = Check::new("m > v + sqrt(q)/sin(pi/n)", &m_rat, &reduced, places);
        self.finish(m, &value, Criterion::Thm31SqrtQ, region, &witness, vec![check])
    }

    /// `f(m) = p^k q`, `|f'(m)| = p^l r` with `m > v + p^s q / sin(pi/n)` for
    /// `s = min(l, k/2)`, or the square-root variant without rational roots.
    pub fn certify_sector_prime_power(&self, m: &BigInt, q_max: u64) -> Attempt {
        let setup = self.sector_ready()?;
        let mi = self.internal_m(m)?;
        self.early_region_check(setup, &mi)?;
        let value = self.positive_value(&mi)?;
        let deriv = self.f.derivative().evaluate(&mi);
        let witness = match extract_witness(&value, &deriv, q_max.max(1), WitnessMode::PrimePower) {
            Ok(Some(w)) => w,
            _ => {
                return Err(Rejection::new(
                    RejectKind::WitnessAbsent,
                    format!("f(m) = {value} is not p^k*q with q <= {q_max}"),
                ))
            }
        };
        let places = self.places();
        let m_rat = BigRational::from_integer(mi.clone());
        // (p^s q)^2 = p^(2s) q^2 is an integer
        let two_s = (2 * witness.ell.expect("prime-power witness")).min(witness.k);
        let square = BigRational::from_integer(witness.p.pow(two_s) * &witness.q * &witness.q);
        let region = RegionRecord::Sector { sector: SectorRecord::of(&setup.report.best, places) };
        let radius = nth_root_bounds(&square, 2, &self.prec).upper;
        let full = self.threshold(setup, &radius);
        if m_rat > full {
            let check = Check::new("m > v + p^s*q/sin(pi/n)", &m_rat, &full, places);
            return self.finish(m, &value, Criterion::Thm35PrimePower, region, &witness, vec![check]);
        }
        if !self.no_rational_root() {
            return Err(Rejection::new(
                RejectKind::OutsideRegion,
                format!("m <= v + p^s*q/sin(pi/n) ~ {} and f may have a rational root", decimal_up(&full, 6)),
            ));
        }
        let reduced = self.threshold(setup, &nth_root_bounds(&square, 4, &self.prec).upper);
        let check = Check::new("m > v + sqrt(p^s*q)/sin(pi/n)", &m_rat, &reduced, places);
        self.finish(m, &value, Criterion::Thm35Sqrt, region, &witness, vec![check])
    }

    fn lens_checks(&self, setup: &LensSetup, interval: &AdmissibleInterval, m_rat: &BigRational) -> Vec<Check> {
        let places = self.places();
        vec![
            Check::new("tan(pi/2n)/2 > v~", &setup.half_tan.lower, &setup.lens.v_tilde.upper, places),
            Check::new("m > interval lo", m_rat, &interval.lo.upper, places),
            Check::new("interval hi > m", &interval.hi.lower, m_rat, places),
        ]
    }

    /// `f(m)` prime with `m` inside the cot interval, else inside the
    /// disk-in-lens interval.
    pub fn certify_lens(&self, m: &BigInt) -> Attempt {
        let setup = self.lens_ready()?;
        let mi = self.internal_m(m)?;
        let (tag, interval, cross) = if setup.cot.contains(&mi) {
            (Criterion::Cor310Cot, &setup.cot, &setup.disk)
        } else if setup.disk.contains(&mi) {
            (Criterion::Thm39Lens, &setup.disk, &setup.cot)
        } else {
            return Err(Rejection::new(RejectKind::OutsideRegion, format!("m outside {}", setup.disk)));
        };
        let (value, witness) = self.prime_value(&mi)?;
        let places = self.places();
        let region = RegionRecord::Lens {
            lens: LensRecord::of(&setup.lens, places),
            interval: IntervalRecord::of(interval, places),
            cross_check: IntervalRecord::of(cross, places),
        };
        let checks = self.lens_checks(setup, interval, &BigRational::from_integer(mi));
        self.finish(m, &value, tag, region, &witness, checks)
    }

    /// `f(m)` prime with `m` in the cot interval or beyond `v + 1/sin(pi/n)`.
    pub fn certify_combined(&self, m: &BigInt) -> Attempt {
        let setup = self.sector_ready()?;
        let mi = self.internal_m(m)?;
        let m_rat = BigRational::from_integer(mi.clone());
        let places = self.places();
        let lens = self.lens.as_ref().ok();
        let ray_lo = self.threshold(setup, &BigRational::one());
        let (branch, checks) = match lens {
            Some(l) if l.cot.contains(&mi) => ("lens", self.lens_checks(l, &l.cot, &m_rat)),
            _ if m_rat > ray_lo => ("ray", vec![Check::new("m > v + 1/sin(pi/n)", &m_rat, &ray_lo, places)]),
            _ => return Err(Rejection::new(RejectKind::OutsideRegion, "m outside the combined region")),
        };
        let (value, witness) = self.prime_value(&mi)?;
        let combined = combined_region(&setup.report.best, lens.map(|l| &l.lens), &self.prec);
        let region = RegionRecord::Combined {
            sector: SectorRecord::of(&setup.report.best, places),
            lens: lens.map(|l| LensRecord::of(&l.lens, places)),
            intervals: combined.intervals.iter().map(|i| IntervalRecord::of(i, places)).collect(),
            ray_lo: decimal_up(&combined.ray_lo.upper, places),
            branch: branch.to_string(),
        };
        self.finish(m, &value, Criterion::Cor312Combined, region, &witness, checks)
    }

    pub fn certify(&self, m: &BigInt, family: Family, q_max: u64) -> Attempt {
        match family {
            Family::Lens => self.certify_lens(m),
            Family::SectorPq => self.certify_sector_pq(m, q_max),
            Family::PrimePower => self.certify_sector_prime_power(m, q_max),
            Family::Combined => self.certify_combined(m),
        }
    }

    /// Tries each family in order and returns the first certificate, or the
    /// most informative rejection.
    pub fn certify_first(&self, m: &BigInt, families: &[Family], q_max: u64) -> Attempt {
        let mut rejections = Vec::new();
        for &fam in families {
            match self.certify(m, fam, q_max) {
                Ok(c) => return Ok(c),
                Err(r) => rejections.push(r),
            }
        }
        let rank = |k: RejectKind| match k {
            RejectKind::ValueComposite => 0,
            RejectKind::WitnessAbsent => 1,
            RejectKind::OutsideRegion => 2,
            RejectKind::NotApplicable => 3,
        };
        Err(rejections
            .into_iter()
            .min_by_key(|r| rank(r.kind))
            .unwrap_or_else(|| Rejection::new(RejectKind::NotApplicable, "no criterion selected")))
    }
}

/// Free-standing forms of the certifier operations.
pub fn certify_sector_pq(f: &Polynomial, m: &BigInt, q_max: u64, prec: Precision) -> Attempt {
    Certifier::new(f, prec).certify_sector_pq(m, q_max)
}

pub fn certify_sector_prime_power(f: &Polynomial, m: &BigInt, q_max: u64, prec: Precision) -> Attempt {
    Certifier::new(f, prec).certify_sector_prime_power(m, q_max)
}

pub fn certify_lens(f: &Polynomial, m: &BigInt, prec: Precision) -> Attempt {
    Certifier::new(f, prec).certify_lens(m)
}

pub fn certify_combined(f: &Polynomial, m: &BigInt, prec: Precision) -> Attempt {
    Certifier::new(f, prec).certify_combined(m)
}

fn reissue(c: &Certificate, f: &Polynomial, m: &BigInt, q: u64, prec: Precision) -> Attempt {
    let certifier = if c.argument_negated { Certifier::negated(f, prec) } else { Certifier::new(f, prec) };
    certifier.certify(m, c.criterion.family(), q)
}

/// Replays a certificate: it must be reproduced exactly at its recorded
/// precision, and again at doubled precision with positive margins and
/// region enclosures that intersect the recorded ones.
pub fn certificate_verify(c: &Certificate) -> Result<bool> {
    if c.schema != SCHEMA_VERSION {
        return Err(Error::MalformedCertificate(format!("unsupported schema version {}", c.schema)));
    }
    if c.digits == 0 {
        return Err(Error::MalformedCertificate("digits must be positive".into()));
    }
    let f = c.polynomial()?;
    let m: BigInt = c.m.parse().map_err(|_| Error::MalformedCertificate(format!("bad m {:?}", c.m)))?;
    let q: u64 = match c.witness.q.parse::<u64>() {
        Ok(q) if q >= 1 => q,
        _ => return Ok(false),
    };
    let prec = Precision::new(c.digits);
    if prec.digits() != c.digits {
        return Ok(false);
    }
    match reissue(c, &f, &m, q, prec) {
        Ok(same) if same == *c => {}
        _ => return Ok(false),
    }
    let Ok(fine) = reissue(c, &f, &m, q, prec.doubled()) else { return Ok(false) };
    if fine.criterion != c.criterion || fine.witness != c.witness || fine.value != c.value {
        return Ok(false);
    }
    if !fine.checks.iter().all(Check::passes) {
        return Ok(false);
    }
    let recorded = c.region.enclosures();
    let recomputed = fine.region.enclosures();
    if recorded.len() != recomputed.len() {
        return Ok(false);
    }
    for ((lo_a, hi_a), (lo_b, hi_b)) in recorded.iter().zip(&recomputed) {
        let parse = |s: &String| parse_decimal(s).ok_or_else(|| Error::MalformedCertificate(format!("bad bound {s:?}")));
        if parse(lo_a)? > parse(hi_b)? || parse(lo_b)? > parse(hi_a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MOutcome {
    Certified(Criterion),
    ValueComposite,
    OutsideRegion,
    WitnessAbsent,
    NotApplicable,
}

impl MOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            MOutcome::Certified(c) => c.as_str(),
            MOutcome::ValueComposite => "value-composite",
            MOutcome::OutsideRegion => "outside-region",
            MOutcome::WitnessAbsent => "witness-absent",
            MOutcome::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub lo: BigInt,
    /// Last scanned argument; below the requested end when the search
    /// stopped at its first certificate.
    pub scanned_hi: BigInt,
    pub outcomes: Vec<(BigInt, MOutcome)>,
    pub certificates: Vec<Certificate>,
}

impl SearchReport {
    pub fn first(&self) -> Option<&Certificate> {
        self.certificates.first()
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub q_max: u64,
    pub families: Vec<Family>,
    pub exhaustive: bool,
    pub allow_negative: bool,
    pub prec: Precision,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            q_max: 1,
            families: Family::DEFAULT_ORDER.to_vec(),
            exhaustive: false,
            allow_negative: false,
            prec: Precision::default(),
        }
    }
}

const SEARCH_CHUNK: i64 = 64;

/// Scans `lo..=hi` in ascending order and certifies with the first family
/// that applies; stops at the first certificate unless `exhaustive`.
pub fn search_m(f: &Polynomial, lo: &BigInt, hi: &BigInt, opts: &SearchOptions) -> Result<SearchReport> {
    if lo > hi {
        return Err(Error::EmptyRange);
    }
    let pos = Certifier::new(f, opts.prec);
    let neg = (opts.allow_negative && lo.is_negative()).then(|| Certifier::negated(f, opts.prec));
    let attempt = |m: &BigInt| -> Attempt {
        match &neg {
            Some(nc) if m.is_negative() => nc.certify_first(m, &opts.families, opts.q_max),
            _ => pos.certify_first(m, &opts.families, opts.q_max),
        }
    };
    let mut outcomes = Vec::new();
    let mut certificates = Vec::new();
    let mut start = lo.clone();
    let mut scanned_hi = lo.clone();
    while start <= *hi {
        let end = (&start + BigInt::from(SEARCH_CHUNK - 1)).min(hi.clone());
        let span = (&end - &start).to_i64().expect("chunk fits") + 1;
        let results: Vec<(BigInt, Attempt)> = (0..span)
            .into_par_iter()
            .map(|i| {
                let m = &start + i;
                let a = attempt(&m);
                (m, a)
            })
            .collect();
        let mut stop = false;
        for (m, a) in results {
            scanned_hi = m.clone();
            match a {
                Ok(cert) => {
                    outcomes.push((m, MOutcome::Certified(cert.criterion)));
                    certificates.push(cert);
                    if !opts.exhaustive {
                        stop = true;
                        break;
                    }
                }
                Err(r) => {
                    let o = match r.kind {
                        RejectKind::ValueComposite => MOutcome::ValueComposite,
                        RejectKind::OutsideRegion => MOutcome::OutsideRegion,
                        RejectKind::WitnessAbsent => MOutcome::WitnessAbsent,
                        RejectKind::NotApplicable => MOutcome::NotApplicable,
                    };
                    outcomes.push((m, o));
                }
            }
        }
        if stop {
            break;
        }
        start = end + 1;
    }
    Ok(SearchReport { lo: lo.clone(), scanned_hi, outcomes, certificates })
}
