//! Declarative polynomial families for `scan`.

use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Deserialize;

use sectorcert::arith::is_prime;
use sectorcert::parse::parse_polynomial;
use sectorcert::{Certifier, Family, Polynomial, Precision};

const MAX_INSTANCES: usize = 100_000;

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Descriptor {
    /// Base-`base` digit polynomial of every prime in `[lo, hi]`, tried at `m = base`.
    DigitsOfPrimes {
        #[serde(default = "ten")]
        base: u64,
        lo: u64,
        hi: u64,
    },
    /// `f + p^k - f(m)` for primes `p` in `[p_lo, p_hi]`; for `k >= 2` only
    /// primes above `f'(m)` are taken.
    ShiftToPrime {
        polynomial: String,
        m: i64,
        p_lo: u64,
        p_hi: u64,
        #[serde(default = "one")]
        k: u32,
    },
    /// `X^4 - a X^3 + b` with `b > 216 a` and `f(m)` prime.
    Quartic {
        a_lo: i64,
        a_hi: i64,
        b_lo: i64,
        b_hi: i64,
        #[serde(default = "three")]
        m: i64,
    },
}

fn ten() -> u64 {
    10
}

fn one() -> u32 {
    1
}

fn three() -> i64 {
    3
}

struct Instance {
    label: String,
    f: Polynomial,
    m: BigInt,
    families: Vec<Family>,
}

fn proven_prime(x: &BigInt) -> bool {
    is_prime(x).is_prime()
}

fn digits(x: u64, base: u64) -> Polynomial {
    let mut c = Vec::new();
    let mut x = x;
    while x > 0 {
        c.push(BigInt::from(x % base));
        x /= base;
    }
    Polynomial::new(c)
}

fn check_span(lo: i128, hi: i128, what: &str) -> anyhow::Result<()> {
    if lo > hi {
        bail!("{what}: empty range");
    }
    if hi - lo >= 10_000_000 {
        bail!("{what}: range too large");
    }
    Ok(())
}

fn instances(d: &Descriptor) -> anyhow::Result<Vec<Instance>> {
    let mut out = Vec::new();
    match d {
        Descriptor::DigitsOfPrimes { base, lo, hi } => {
            if *base < 2 {
                bail!("base must be at least 2");
            }
            check_span(*lo as i128, *hi as i128, "digits_of_primes")?;
            for x in *lo..=*hi {
                if x >= *base && proven_prime(&BigInt::from(x)) {
                    out.push(Instance {
                        label: x.to_string(),
                        f: digits(x, *base),
                        m: BigInt::from(*base),
                        families: Family::DEFAULT_ORDER.to_vec(),
                    });
                }
            }
        }
        Descriptor::ShiftToPrime { polynomial, m, p_lo, p_hi, k } => {
            check_span(*p_lo as i128, *p_hi as i128, "shift_to_prime")?;
            if *k == 0 {
                bail!("k must be at least 1");
            }
            let f = parse_polynomial(polynomial).map_err(|e| anyhow!("{e}"))?;
            let mb = BigInt::from(*m);
            let fm = f.evaluate(&mb);
            let slope = f.derivative().evaluate(&mb).abs();
            let families = if *k >= 2 { vec![Family::PrimePower] } else { Family::DEFAULT_ORDER.to_vec() };
            for p in *p_lo..=*p_hi {
                let pb = BigInt::from(p);
                if !proven_prime(&pb) || (*k >= 2 && pb <= slope) {
                    continue;
                }
                let shift = num_traits::Pow::pow(&pb, *k) - &fm;
                let g = &f + &Polynomial::constant(shift);
                out.push(Instance { label: format!("p={p}"), f: g, m: mb.clone(), families: families.clone() });
            }
        }
        Descriptor::Quartic { a_lo, a_hi, b_lo, b_hi, m } => {
            check_span(*a_lo as i128, *a_hi as i128, "quartic a")?;
            check_span(*b_lo as i128, *b_hi as i128, "quartic b")?;
            if (*a_hi as i128 - *a_lo as i128 + 1) * (*b_hi as i128 - *b_lo as i128 + 1) > 10_000_000 {
                bail!("quartic: parameter grid too large");
            }
            let mb = BigInt::from(*m);
            for a in *a_lo..=*a_hi {
                for b in (*b_lo).max(216 * a + 1)..=*b_hi {
                    let f = Polynomial::from_i64(&[b, 0, 0, -a, 1]);
                    if a < 1 || !proven_prime(&f.evaluate(&mb)) {
                        continue;
                    }
                    out.push(Instance {
                        label: format!("a={a} b={b}"),
                        f,
                        m: mb.clone(),
                        families: Family::DEFAULT_ORDER.to_vec(),
                    });
                    if out.len() > MAX_INSTANCES {
                        bail!("family has more than {MAX_INSTANCES} instances");
                    }
                }
            }
        }
    }
    if out.len() > MAX_INSTANCES {
        bail!("family has more than {MAX_INSTANCES} instances");
    }
    Ok(out)
}

pub fn run(spec: &str, prec: Precision, as_json: bool) -> anyhow::Result<()> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
    };
    let d: Descriptor = serde_json::from_str(&text).context("invalid family descriptor")?;
    let list = instances(&d)?;
    let rows: Vec<(String, String, String, Result<String, String>)> = list
        .par_iter()
        .map(|inst| {
            let res = if inst.m.is_positive() {
                Certifier::new(&inst.f, prec)
            } else {
                Certifier::negated(&inst.f, prec)
            }
            .certify_first(&inst.m, &inst.families, 1)
            .map(|c| c.criterion.as_str().to_string())
            .map_err(|r| r.to_string());
            (inst.label.clone(), inst.f.to_string(), inst.m.to_string(), res)
        })
        .collect();
    let certified = rows.iter().filter(|r| r.3.is_ok()).count();
    if as_json {
        let items: Vec<_> = rows
            .iter()
            .map(|(label, f, m, res)| match res {
                Ok(c) => serde_json::json!({"instance": label, "polynomial": f, "m": m, "certified": true, "criterion": c}),
                Err(e) => serde_json::json!({"instance": label, "polynomial": f, "m": m, "certified": false, "reason": e}),
            })
            .collect();
        let body = serde_json::json!({"instances": items, "certified": certified, "total": rows.len()});
        println!("{}", serde_json::to_string_pretty(&body)?);
    } else {
        for (label, f, m, res) in &rows {
            match res {
                Ok(c) => println!("{label}\t{f}\tm={m}\tcertified {c}"),
                Err(e) => println!("{label}\t{f}\tm={m}\tnot certified: {e}"),
            }
        }
        println!("certified {certified}/{}", rows.len());
    }
    Ok(())
}
