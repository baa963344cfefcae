mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use proptest::prelude::*;

use sectorcert::arith::{extract_witness, is_prime, p_adic_valuation, WitnessMode};
use sectorcert::bounded::nth_root_bounds;
use sectorcert::certify::{certify_sector_pq, RejectKind};
use sectorcert::lens::interval_disk_in_lens;
use sectorcert::oracle::{irreducible_bruteforce, roots_numeric, Irreducibility};
use sectorcert::sector::{proportional_weights, sector_min_over_positives, sector_neg_sum, sector_parametrized, sector_shifted};
use sectorcert::{best_sector, Certificate, Lens, Polynomial, Precision};

fn prec() -> Precision {
    Precision::default()
}

fn poly(max_deg: usize, bound: i64) -> impl Strategy<Value = Polynomial> {
    (1..=max_deg)
        .prop_flat_map(move |d| (prop::collection::vec(-bound..=bound, d), 1..=bound))
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            Polynomial::from_i64(&c)
        })
}

fn with_negative(max_deg: usize, bound: i64) -> impl Strategy<Value = Polynomial> {
    poly(max_deg, bound).prop_filter("needs a negative coefficient", |f| f.coeffs().iter().any(Signed::is_negative))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (0i64..20, 1i64..10).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

proptest! {
    #[test]
    fn horner_matches_power_sum(f in poly(8, 1000), m in -1000i64..1000) {
        let m = BigInt::from(m);
        let naive: BigInt = f.coeffs().iter().enumerate().map(|(i, c)| c * Pow::pow(&m, i)).sum();
        prop_assert_eq!(f.evaluate(&m), naive);
    }

    #[test]
    fn reciprocal_is_involution(f in poly(8, 50)) {
        prop_assume!(!f.constant_term().is_zero());
        prop_assert_eq!(f.reciprocal().unwrap().reciprocal().unwrap(), f);
    }

    #[test]
    fn shifts_compose(f in poly(6, 20), a in rational(), b in rational()) {
        prop_assert_eq!(f.shift(&a).shift(&b), f.shift(&(a + b)));
    }

    #[test]
    fn partial_sum_recurrence(f in poly(8, 50), a in rational()) {
        let ps = f.partial_sums(&a).unwrap();
        let n = f.degree();
        for j in 0..n {
            let next = &a * &ps.sums[j] + BigRational::from_integer(f.coeff(n - j - 1));
            prop_assert_eq!(&ps.sums[j + 1], &next);
        }
    }

    #[test]
    fn sign_blocks_cover_nonzero_indices(f in poly(10, 5)) {
        let part = f.sign_blocks().unwrap();
        let mut covered = Vec::new();
        for b in &part.blocks {
            covered.extend((b.pos_lo..=b.pos_hi).rev().filter(|&i| f.coeff(i).is_positive()));
            if let Some(n) = &b.neg {
                covered.extend((n.lo..=n.hi).rev().filter(|&i| f.coeff(i).is_negative()));
            }
        }
        let nonzero: Vec<usize> = (0..=f.degree()).rev().filter(|&i| !f.coeff(i).is_zero()).collect();
        prop_assert_eq!(covered, nonzero.clone());
        let flips = nonzero.windows(2).filter(|w| f.coeff(w[0]).signum() != f.coeff(w[1]).signum()).count();
        prop_assert_eq!(part.sign_changes, flips);
    }

    #[test]
    fn min_over_positives_dominates(f in with_negative(8, 20)) {
        let a = sector_min_over_positives(&f, &prec()).unwrap();
        let b = sector_neg_sum(&f, &prec()).unwrap();
        prop_assert!(a.vertex.upper <= b.vertex.upper);
    }

    #[test]
    fn endpoint_maximum(f in with_negative(8, 20)) {
        let sets = f.sign_index_sets().unwrap();
        let n = f.degree() as u32;
        let base = BigRational::new(sets.neg_sum_abs.clone(), f.leading());
        let all: Vec<_> = sets.neg_indices.iter().map(|&j| nth_root_bounds(&base, n - j as u32, &prec())).collect();
        let lower = all.iter().map(|b| b.lower.clone()).max().unwrap();
        let upper = all.iter().map(|b| b.upper.clone()).max().unwrap();
        let s = sector_neg_sum(&f, &prec()).unwrap();
        prop_assert!(s.vertex.lower <= upper && lower <= s.vertex.upper);
    }

    #[test]
    fn proportional_weights_reproduce_neg_sum(f in with_negative(8, 20)) {
        let w = proportional_weights(&f).unwrap();
        let a = sector_parametrized(&f, &w, &prec()).unwrap();
        let b = sector_neg_sum(&f, &prec()).unwrap();
        prop_assert_eq!(a.vertex, b.vertex);
    }

    #[test]
    fn shifted_sector_means_nonnegative_shift(f in poly(6, 10), a in rational()) {
        if let Ok(Some(_)) = sector_shifted(&f, &a) {
            prop_assert!(f.shift(&a).all_nonnegative());
        }
    }

    #[test]
    fn vertex_width_discipline(f in poly(8, 20)) {
        let report = best_sector(&f, None, &prec()).unwrap();
        let target = BigRational::new(1.into(), BigInt::from(10).pow(12u32));
        for s in report.candidates.iter().filter_map(|c| c.outcome.as_ref().ok()) {
            prop_assert!(s.vertex.lower <= s.vertex.upper);
            prop_assert!(!s.vertex.lower.is_negative());
            let scale = s.vertex.upper.clone().max(BigRational::one());
            prop_assert!(s.vertex.width() <= &target * scale);
        }
    }

    #[test]
    fn witness_reconstructs(v in 1u64..10_000_000, d in 0u64..100_000, q_max in 1u64..6) {
        let value = BigInt::from(v);
        let deriv = BigInt::from(d);
        for mode in [WitnessMode::Pq, WitnessMode::PrimePower] {
            if let Some(w) = extract_witness(&value, &deriv, q_max, mode).unwrap() {
                prop_assert_eq!(Pow::pow(&w.p, w.k) * &w.q, value.clone());
                prop_assert!(!(&w.q % &w.p).is_zero());
                prop_assert!(w.primality.is_prime());
                if let (Some(ell), Some(r)) = (w.ell, &w.r) {
                    if !deriv.is_zero() {
                        prop_assert_eq!(Pow::pow(&w.p, ell) * r, deriv.clone());
                        prop_assert!(!(r % &w.p).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn valuation_is_maximal(x in 1i64..1_000_000_000, p in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13, 97])) {
        let (v, rest) = p_adic_valuation(&BigInt::from(x), &BigInt::from(p)).unwrap();
        prop_assert_eq!(Pow::pow(&BigInt::from(p), v) * &rest, BigInt::from(x));
        prop_assert!(!rest.is_multiple_of(&BigInt::from(p)));
    }

    #[test]
    fn vieta_on_converged_runs(f in poly(8, 20)) {
        let r = roots_numeric(&f, 1e-12).unwrap();
        prop_assume!(r.converged);
        let an = f.leading().to_string().parse::<f64>().unwrap();
        let n = f.degree();
        let sum: num_complex::Complex64 = r.roots.iter().sum();
        let prod: num_complex::Complex64 = r.roots.iter().product();
        let want_sum = -f.coeff(n - 1).to_string().parse::<f64>().unwrap() / an;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let want_prod = sign * f.constant_term().to_string().parse::<f64>().unwrap() / an;
        let rel = |got: num_complex::Complex64, want: f64| (got - want).norm() / want.abs().max(1.0);
        prop_assert!(rel(sum, want_sum) < 1e-8, "sum {} vs {}", sum, want_sum);
        prop_assert!(rel(prod, want_prod) < 1e-8, "prod {} vs {}", prod, want_prod);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sector_certificates_agree_with_oracle(f in poly(6, 50), m in 2i64..60) {
        prop_assume!(f.degree() >= 2 && f.content().is_one());
        if let Ok(c) = certify_sector_pq(&f, &BigInt::from(m), 1, prec()) {
            let verdict = irreducible_bruteforce(&f).unwrap();
            prop_assert!(verdict == Irreducibility::Irreducible, "{} at {}: {:?}", f, m, verdict);
            let back = Certificate::from_json(&c.to_json()).unwrap();
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn certification_is_monotone_in_m(f in poly(4, 9), q in 1u64..4) {
        prop_assume!(f.degree() >= 2);
        let first = (1..80).find_map(|m| certify_sector_pq(&f, &BigInt::from(m), q, prec()).ok().map(|c| (m, c)));
        if let Some((m, c)) = first {
            let q0: u64 = c.witness.q.parse().unwrap();
            for m2 in m + 1..m + 40 {
                match certify_sector_pq(&f, &BigInt::from(m2), q0, prec()) {
                    Ok(_) => {}
                    Err(r) => prop_assert!(
                        matches!(r.kind, RejectKind::ValueComposite | RejectKind::WitnessAbsent | RejectKind::NotApplicable),
                        "{} certified at {} but not at {}: {}", f, m, m2, r
                    ),
                }
            }
        }
    }

    #[test]
    fn kronecker_finds_planted_factors(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let g = common::planted_product(&mut r, 6, 10);
        let g = Polynomial::new(g.coeffs().iter().map(|c| c / g.content()).collect());
        prop_assert!(matches!(irreducible_bruteforce(&g).unwrap(), Irreducibility::Reducible(_)), "{}", g);
    }

    #[test]
    fn kronecker_keeps_irreducible_quadratics(a in 1i64..30, b in -30i64..30, c in 1i64..30) {
        prop_assume!(b * b - 4 * a * c < 0);
        let f = Polynomial::from_i64(&[c, b, a]);
        prop_assume!(f.content().is_one());
        prop_assert_eq!(irreducible_bruteforce(&f).unwrap(), Irreducibility::Irreducible);
    }

    #[test]
    fn kronecker_keeps_cubics_without_rational_roots(c in prop::collection::vec(-20i64..20, 3), a in 1i64..10) {
        let f = Polynomial::from_i64(&[c[0], c[1], c[2], a]);
        prop_assume!(!c[0].is_zero() && f.content().is_one());
        let has_root = (1..=c[0].abs()).filter(|p| c[0] % p == 0).any(|p| {
            (1..=a).filter(|q| a % q == 0).any(|q| {
                [p, -p].iter().any(|&p| f.evaluate_rational(&BigRational::new(p.into(), q.into())).is_zero())
            })
        });
        prop_assume!(!has_root);
        prop_assert_eq!(irreducible_bruteforce(&f).unwrap(), Irreducibility::Irreducible);
    }
}

#[test]
fn primality_matches_sieve_below_a_million() {
    const N: usize = 1_000_000;
    let mut composite = vec![false; N + 1];
    for i in 2..=1000 {
        if !composite[i] {
            for j in (i * i..=N).step_by(i) {
                composite[j] = true;
            }
        }
    }
    for x in 0..=N {
        let sieve = x >= 2 && !composite[x];
        assert_eq!(is_prime(&BigInt::from(x)).is_prime(), sieve, "x = {x}");
    }
}

#[test]
fn disk_interval_widens_as_v_tilde_shrinks() {
    let ratio = BigRational::new(9.into(), 10.into());
    for n in 3..=12usize {
        // log-spaced, decreasing, all below pi/(4n)
        let mut vt = BigRational::new(3.into(), (4 * n).into());
        let mut last: Option<(BigRational, BigRational)> = None;
        for _ in 0..20 {
            let lens = Lens::with_vertex(vt.clone(), n).unwrap();
            let i = interval_disk_in_lens(&lens, &prec()).unwrap();
            if let Some((lo, hi)) = &last {
                assert!(i.lo.upper <= *lo && i.hi.lower >= *hi, "n = {n}, v~ = {vt}");
            }
            last = Some((i.lo.upper, i.hi.lower));
            vt *= &ratio;
        }
    }
}
