//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use sectorcert::arith::{is_prime, PrimalityStatus};
use sectorcert::bounded::{decimal_down, parse_decimal};
use sectorcert::certify::{certify_lens, certify_sector_pq, Family, RegionRecord};
use sectorcert::lens::{interval_cot, interval_disk_in_lens, interval_effective};
use sectorcert::oracle::{in_lens, in_sector, irreducible_bruteforce, roots_numeric, Irreducibility};
use sectorcert::parse::parse_polynomial;
use sectorcert::sector::{
    binomial_weights, proportional_weights, sector_min_over_positives, sector_neg_sum, sector_nonneg_real_part,
    sector_parametrized,
};
use sectorcert::{
    best_sector, certificate_verify, lens_of, Certificate, Certifier, Criterion, Lens, LensOutcome, Polynomial,
    Precision, Sector,
};

use common::{digit_poly, planted_product, random_poly, rng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn prec() -> Precision {
    Precision::default()
}

/// Fuzz corpus shared by the sector, lens and dominance criteria.
fn fuzz_corpus() -> Vec<Polynomial> {
    let mut r = rng(3);
    (0..1000)
        .map(|_| {
            let deg = r.gen_range(2..=8);
            random_poly(&mut r, deg, 20)
        })
        .collect()
}

fn all_sectors(f: &Polynomial) -> Vec<Sector> {
    let mut out: Vec<Sector> = best_sector(f, None, &prec())
        .map(|r| r.candidates.into_iter().filter_map(|c| c.outcome.ok()).collect())
        .unwrap_or_default();
    out.extend(sector_nonneg_real_part(f).ok());
    if let Ok(sets) = f.sign_index_sets() {
        let ell = sets.neg_indices.len();
        if ell > 0 {
            out.extend(sector_parametrized(f, &binomial_weights(ell), &prec()).ok());
            if let Ok(w) = proportional_weights(f) {
                out.extend(sector_parametrized(f, &w, &prec()).ok());
            }
        }
    }
    out
}

fn criterion_1(issued: &mut Vec<Certificate>) -> Outcome {
    let start = Instant::now();
    let f = parse_polynomial("X^4-10*X^3+2162").expect("parses");
    let c = match certify_lens(&f, &BigInt::from(3), prec()) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("no certificate: {e}")),
    };
    let elapsed = start.elapsed();
    let RegionRecord::Lens { interval, .. } = &c.region else { return outcome(false, "wrong region kind") };
    let lo = parse_decimal(&interval.lo).unwrap().to_f64().unwrap();
    let hi = parse_decimal(&interval.hi).unwrap().to_f64().unwrap();
    let bounds_ok = (lo - 2.41).abs() <= 1e-2 && (hi - 3.59).abs() <= 1e-2;
    let oracle = irreducible_bruteforce(&f).unwrap() == Irreducibility::Irreducible;
    let pass = c.criterion == Criterion::Cor310Cot
        && c.value == "1973"
        && c.primality.status == PrimalityStatus::ProvenPrime
        && bounds_ok
        && oracle
        && elapsed < Duration::from_secs(1);
    let detail = format!(
        "{} f(3)={} {:?} interval ({lo:.6}, {hi:.6}) oracle irreducible={oracle} {:.0?}",
        c.criterion.as_str(),
        c.value,
        c.primality.status,
        elapsed
    );
    issued.push(c);
    outcome(pass, detail)
}

fn criterion_2(issued: &mut Vec<Certificate>) -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut primes = Vec::new();
    while primes.len() < 100 {
        let x: u64 = r.gen_range(1_000..=1_000_000);
        if is_prime(&BigInt::from(x)).status == PrimalityStatus::ProvenPrime && !primes.contains(&x) {
            primes.push(x);
        }
    }
    let mut failures = Vec::new();
    for &x in &primes {
        let f = digit_poly(x, 10);
        let ok = match certify_sector_pq(&f, &BigInt::from(10), 1, prec()) {
            Ok(c) if c.criterion == Criterion::Cor32Nonneg => {
                issued.push(c);
                true
            }
            _ => false,
        };
        let oracle = irreducible_bruteforce(&f).map(|v| v == Irreducibility::Irreducible).unwrap_or(false);
        if !ok || !oracle {
            failures.push(x);
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(60);
    outcome(pass, format!("{}/100 certified and confirmed, failures {failures:?}, {elapsed:.1?}", 100 - failures.len()))
}

fn criterion_3(corpus: &[Polynomial]) -> Outcome {
    let start = Instant::now();
    let (mut violations, mut skipped, mut checked) = (Vec::new(), 0, 0);
    for f in corpus {
        let roots = roots_numeric(f, 1e-12).unwrap();
        if !roots.converged {
            skipped += 1;
            continue;
        }
        let margin = 1e-6 + roots.residual_bound;
        for s in all_sectors(f) {
            checked += 1;
            if let Some(z) = roots.roots.iter().find(|z| in_sector(**z, &s, margin)) {
                violations.push(format!("{f} {} root {z}", s.method));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!("{checked} sectors, {} violations, {skipped} root runs skipped, {elapsed:.1?} {violations:?}", violations.len()),
    )
}

fn criterion_4(corpus: &[Polynomial]) -> Outcome {
    let (mut violations, mut skipped, mut lenses, mut half_planes) = (Vec::new(), 0, 0, 0);
    for f in corpus.iter().filter(|f| f.degree() >= 3 && !f.constant_term().is_zero()) {
        let roots = roots_numeric(f, 1e-12).unwrap();
        if !roots.converged {
            skipped += 1;
            continue;
        }
        let margin = 1e-6 + roots.residual_bound;
        let inside: Box<dyn Fn(Complex64) -> bool> = match lens_of(f, &prec()).unwrap() {
            LensOutcome::Lens(l) => {
                lenses += 1;
                Box::new(move |z| in_lens(z, &l, margin))
            }
            // S_{0,pi/n} is its own image under inversion, up to conjugation
            LensOutcome::HalfPlane(s) => {
                half_planes += 1;
                Box::new(move |z| in_sector(z, &s, margin))
            }
        };
        if let Some(z) = roots.roots.iter().find(|z| inside(**z)) {
            violations.push(format!("{f} root {z}"));
        }
    }
    outcome(
        violations.is_empty(),
        format!("{lenses} lenses, {half_planes} half-planes, {} violations, {skipped} skipped {violations:?}", violations.len()),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut r = rng(5);
    let families = [Family::Lens, Family::SectorPq, Family::PrimePower, Family::Combined];
    let mut issued = Vec::new();
    let mut attempts = 0u64;
    for _ in 0..500 {
        let f = planted_product(&mut r, 8, 10);
        let certifier = Certifier::new(&f, prec());
        for q_max in [1, 3] {
            for m in 1..=100 {
                for fam in families {
                    attempts += 1;
                    if let Ok(c) = certifier.certify(&BigInt::from(m), fam, q_max) {
                        issued.push(format!("{f} m={m} {}", c.criterion.as_str()));
                    }
                }
            }
        }
    }
    outcome(issued.is_empty(), format!("{attempts} attempts, {} certificates {issued:?}, {:.1?}", issued.len(), start.elapsed()))
}

fn criterion_6() -> Outcome {
    let f = Polynomial::from_i64(&[-1, -8, 1, -3, 0, -7, 0, 0, 5, 2]);
    let blocks = f.sign_blocks().unwrap();
    let sums: Vec<(BigInt, BigInt)> = blocks
        .blocks
        .iter()
        .map(|b| (b.pos_sum.clone(), b.neg.as_ref().map(|n| n.sum.clone()).unwrap_or_default()))
        .collect();
    let expected = vec![(BigInt::from(7), BigInt::from(10)), (BigInt::from(1), BigInt::from(9))];
    let rec = Polynomial::from_i64(&[2162, 0, 0, -10, 1]).reciprocal().unwrap();
    let pass = sums == expected && rec == Polynomial::from_i64(&[1, -10, 0, 0, 2162]);
    outcome(pass, format!("block sums {sums:?}, reciprocal {rec}"))
}

fn criterion_7(corpus: &[Polynomial]) -> Outcome {
    let mut dominance_checked = 0;
    let mut violations = Vec::new();
    for f in corpus.iter().filter(|f| f.coeffs().iter().any(Signed::is_negative)) {
        let a = sector_min_over_positives(f, &prec()).unwrap();
        let b = sector_neg_sum(f, &prec()).unwrap();
        dominance_checked += 1;
        if a.vertex.upper > b.vertex.upper {
            violations.push(format!("dominance {f}"));
        }
    }
    // v~ = (k/21) * 3.14159 / (4n) stays below both interval preconditions
    let pi_low = BigRational::new(314159.into(), 100000.into());
    let mut grid = 0;
    for n in 3..=12usize {
        for k in 1..=20 {
            let vt = &pi_low * BigRational::new(k.into(), (21 * 4 * n).into());
            let lens = Lens::with_vertex(vt.clone(), n).unwrap();
            let (Ok(eff), Ok(cot), Ok(disk)) =
                (interval_effective(&lens, &prec()), interval_cot(&lens, &prec()), interval_disk_in_lens(&lens, &prec()))
            else {
                violations.push(format!("precondition n={n} k={k}"));
                continue;
            };
            grid += 1;
            let within = |inner: &sectorcert::lens::AdmissibleInterval, outer: &sectorcert::lens::AdmissibleInterval| {
                inner.lo.lower >= outer.lo.upper && inner.hi.upper <= outer.hi.lower
            };
            if !within(&eff, &cot) || !within(&cot, &disk) {
                violations.push(format!("inclusion n={n} v~={}", decimal_down(&vt, 6)));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("{dominance_checked} dominance pairs, {grid} grid points, {} violations {violations:?}", violations.len()),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let one = BigRational::one();
    let (mut eligible, mut violations) = (0, Vec::new());
    for a3 in 1..=3 {
        for a2 in -3..=3 {
            for a1 in -3..=3 {
                for a0 in -3..=3 {
                    let f = Polynomial::from_i64(&[a0, a1, a2, a3]);
                    if !f.partial_sums(&one).unwrap().all_nonneg {
                        continue;
                    }
                    eligible += 1;
                    if !f.shift(&one).all_nonnegative() {
                        violations.push(f.to_string());
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations.is_empty() && elapsed < Duration::from_secs(10),
        format!("{eligible} eligible cubics, {} violations, {elapsed:.1?} {violations:?}", violations.len()),
    )
}

/// Single-field edits of a certificate; each must make replay fail.
fn tamperings(c: &Certificate) -> Vec<(&'static str, Certificate)> {
    let bump = |s: &str, d: i64| (s.parse::<BigInt>().unwrap() + d).to_string();
    let mut out = Vec::new();
    let mut t = c.clone();
    t.m = bump(&c.m, 1);
    out.push(("m+1", t));
    let mut t = c.clone();
    t.m = bump(&c.m, -1);
    out.push(("m-1", t));
    let mut t = c.clone();
    t.value = bump(&c.value, 2);
    out.push(("value", t));
    let mut t = c.clone();
    t.polynomial[0] = bump(&c.polynomial[0], 2);
    out.push(("a0", t));
    let mut t = c.clone();
    t.criterion = if c.criterion == Criterion::Thm31Pq { Criterion::Cor32Nonneg } else { Criterion::Thm31Pq };
    out.push(("criterion", t));
    let mut t = c.clone();
    t.witness.p = bump(&c.witness.p, 2);
    out.push(("witness p", t));
    let mut t = c.clone();
    t.witness.q = bump(&c.witness.q, 1);
    out.push(("witness q", t));
    let mut t = c.clone();
    t.witness.k += 1;
    out.push(("witness k", t));
    let mut t = c.clone();
    match &mut t.region {
        RegionRecord::Sector { sector } | RegionRecord::Combined { sector, .. } => {
            let v = parse_decimal(&sector.vertex_upper).unwrap();
            let shrunk = v / BigRational::from_integer(2.into()) - BigRational::new(1.into(), 1000.into());
            sector.vertex_upper = decimal_down(&shrunk, 20);
        }
        RegionRecord::Lens { lens, .. } => lens.v_tilde_upper = "0.1".into(),
    }
    out.push(("loosened vertex", t));
    let mut t = c.clone();
    t.checks[0].margin = "1".into();
    out.push(("check margin", t));
    let mut t = c.clone();
    t.conditional = !c.conditional;
    out.push(("conditional", t));
    let mut t = c.clone();
    t.primality.status = PrimalityStatus::ProbablePrime;
    if c.primality.status == PrimalityStatus::ProbablePrime {
        t.primality.status = PrimalityStatus::ProvenPrime;
    }
    out.push(("primality", t));
    let mut t = c.clone();
    t.digits += 1;
    out.push(("digits", t));
    let mut t = c.clone();
    t.argument_negated = !c.argument_negated;
    out.push(("argument_negated", t));
    out
}

fn criterion_9(issued: &mut Vec<Certificate>) -> Outcome {
    // a few more certificate kinds beyond criteria 1 and 2
    let extra = [
        (Polynomial::from_i64(&[2162, 0, 0, -10, 1]), 13, Family::Combined, 1),
        (Polynomial::from_i64(&[1, 1, 1]), 2, Family::PrimePower, 1),
        (Polynomial::from_i64(&[3, 0, 1]), 3, Family::PrimePower, 3),
        (Polynomial::from_i64(&[-1, -2, 1, 5]), 6, Family::SectorPq, 1),
        (Polynomial::from_i64(&[1, 0, 1]), 3, Family::SectorPq, 2),
    ];
    for (f, m, fam, q) in extra {
        if let Ok(c) = Certifier::new(&f, prec()).certify(&BigInt::from(m), fam, q) {
            issued.push(c);
        }
    }
    let f = Polynomial::from_i64(&[2162, 0, 0, 10, 1]);
    if let Ok(c) = Certifier::negated(&f, prec()).certify_lens(&BigInt::from(-3)) {
        issued.push(c);
    }
    let mut replay_fail = Vec::new();
    let (mut tampered, mut accepted) = (0, Vec::new());
    for c in issued.iter() {
        if certificate_verify(c) != Ok(true) {
            replay_fail.push(format!("{} m={}", c.criterion.as_str(), c.m));
        }
        let json = c.to_json();
        if Certificate::from_json(&json).as_ref() != Ok(c) {
            replay_fail.push(format!("json round trip m={}", c.m));
        }
        for (name, t) in tamperings(c) {
            tampered += 1;
            if certificate_verify(&t) == Ok(true) {
                accepted.push(format!("{name} on {} m={}", c.criterion.as_str(), c.m));
            }
        }
    }
    let pass = replay_fail.is_empty() && accepted.is_empty() && !issued.is_empty();
    outcome(
        pass,
        format!(
            "{} certificates replayed ({} failed), {tampered} tamperings ({} accepted) {replay_fail:?} {accepted:?}",
            issued.len(),
            replay_fail.len(),
            accepted.len()
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for n in 3..=12usize {
        let theta = std::f64::consts::PI / n as f64;
        for k in 1..=20 {
            let vt = 3.14159 * k as f64 / (21.0 * 4.0 * n as f64);
            let lens = Lens::with_vertex(BigRational::from_float(vt).unwrap(), n).unwrap();
            let vt = lens.v_tilde.upper.to_f64().unwrap();
            let tip = 1.0 / vt;
            for s in 0..200 {
                let t = (s as f64 + 0.5) / 200.0;
                // sector boundary point, mapped into the lens boundary
                let rho = vt * (t * std::f64::consts::FRAC_PI_2).tan();
                let w = (Complex64::new(vt, 0.0) + Complex64::from_polar(rho, theta)).inv();
                let y = lens.boundary_f64(w.re).unwrap_or(f64::NAN);
                worst = worst.max((y - w.im.abs()).abs());
                // lens boundary point, mapped back onto the sector boundary
                let x = tip * t;
                let y = lens.boundary_f64(x).unwrap_or(f64::NAN);
                let z = Complex64::new(x, y).inv() - vt;
                worst = worst.max((z.im.atan2(z.re).abs() - theta).abs());
                samples += 2;
            }
        }
    }
    outcome(worst.is_finite() && worst < 1e-9, format!("{samples} samples, worst deviation {worst:.3e}"))
}

fn main() {
    let corpus = fuzz_corpus();
    let mut issued = Vec::new();
    let mut results = Vec::new();
    let mut record = |name: &str, o: Outcome| {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push(o.pass);
    };
    record("1 flagship cot-interval certificate", criterion_1(&mut issued));
    record("2 digit polynomials of primes at m = 10", criterion_2(&mut issued));
    record("3 sector soundness fuzz", criterion_3(&corpus));
    record("4 lens soundness fuzz", criterion_4(&corpus));
    record("5 certifier soundness on planted products", criterion_5());
    record("6 sign-block sums and reciprocal", criterion_6());
    record("7 dominance and interval inclusion", criterion_7(&corpus));
    record("8 partial sums imply nonnegative shift", criterion_8());
    record("9 certificate replay and tamper rejection", criterion_9(&mut issued));
    record("10 inversion between sector and lens boundaries", criterion_10());
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
