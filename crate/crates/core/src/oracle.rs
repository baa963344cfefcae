//! Independent checks used by the test suites: a floating-point root finder,
//! region membership with a safety margin, and an exact Kronecker factor
//! search for small polynomials.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{divisors, factorize};
use crate::error::{Error, Result};
use crate::lens::Lens;
use crate::poly::Polynomial;
use crate::sector::Sector;

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// Every true root lies within this distance of some computed root.
    pub residual_bound: f64,
    pub converged: bool,
}

const MAX_SWEEPS: usize = 1000;
const JITTER_SEED: u64 = 0x5eed_0f_5ec7;

fn to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Value and derivative by Horner, plus a running bound on the rounding
/// error of the value.
fn horner(a: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let r = z.norm();
    for &c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        mag = mag * r + c.abs();
    }
    (p, dp, mag)
}

/// Aberth iteration from a jittered circle of Cauchy radius.
pub fn roots_numeric(f: &Polynomial, tol: f64) -> Result<RootSet> {
    let n = f.degree();
    if f.is_zero() || n < 1 {
        return Err(Error::DegreeTooLow { required: 1, found: n });
    }
    let a: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
    if a.iter().any(|c| !c.is_finite()) {
        return Err(Error::OutOfReach("coefficients exceed floating-point range".into()));
    }
    let an = a[n];
    let radius = 1.0 + a[..n].iter().map(|c| (c / an).abs()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(JITTER_SEED);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64 + rng.gen_range(0.1..0.4)) / n as f64;
            Complex64::from_polar(radius, t + 0.3)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp, _) = horner(&a, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1.0));
        }
        if worst < tol {
            converged = true;
            break;
        }
    }

    // Weierstrass corrections W_i; the disks |x - z_i| <= n|W_i| cover all
    // roots. The rounding error of each evaluation is folded in.
    let eps = f64::EPSILON * (4 * n + 2) as f64;
    let mut residual: f64 = 0.0;
    for i in 0..n {
        let (p, _, mag) = horner(&a, z[i]);
        let denom: f64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).norm()).product::<f64>() * an.abs();
        let w = (p.norm() + eps * mag) / denom;
        residual = residual.max(n as f64 * w);
    }
    if !residual.is_finite() {
        residual = f64::INFINITY;
        converged = false;
    }
    Ok(RootSet { roots: z, residual_bound: residual, converged })
}

/// Whether the disk of radius `margin` around `z` fits inside the open
/// sector.
pub fn in_sector(z: Complex64, sector: &Sector, margin: f64) -> bool {
    let v = sector.vertex.upper.to_f64().unwrap_or(f64::INFINITY);
    let w = z - v;
    let gap = sector.half_angle_f64() - w.im.atan2(w.re).abs();
    gap > 0.0 && w.norm() * gap.min(std::f64::consts::FRAC_PI_2).sin() > margin
}

/// Whether the disk of radius `margin` around `z` fits inside both disks
/// whose intersection is the lens.
pub fn in_lens(z: Complex64, lens: &Lens, margin: f64) -> bool {
    let vt = lens.v_tilde.upper.to_f64().unwrap_or(f64::INFINITY);
    if vt <= 0.0 || !vt.is_finite() {
        return false;
    }
    let theta = std::f64::consts::PI / lens.n as f64;
    let h = 0.5 / vt;
    let r = h / theta.sin();
    let c = h / theta.tan();
    let inside = |cy: f64| (z - Complex64::new(h, cy)).norm() < r - margin;
    inside(c) && inside(-c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible(Polynomial),
    OutOfReach,
}

pub const KRONECKER_BUDGET: Duration = Duration::from_secs(10);

/// `f / g` when `g` divides `f` over the integers.
pub fn exact_quotient(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    if g.is_zero() {
        return None;
    }
    let dg = g.degree();
    let lg = g.leading();
    let mut rem: Vec<BigInt> = f.coeffs().to_vec();
    if f.is_zero() {
        return Some(Polynomial::zero());
    }
    if f.degree() < dg {
        return None;
    }
    let mut quot = vec![BigInt::zero(); f.degree() - dg + 1];
    for k in (0..quot.len()).rev() {
        let top = &rem[k + dg];
        let (c, r) = top.div_rem(&lg);
        if !r.is_zero() {
            return None;
        }
        for (i, gi) in g.coeffs().iter().enumerate() {
            rem[k + i] -= &c * gi;
        }
        quot[k] = c;
    }
    rem.iter().all(Zero::is_zero).then(|| Polynomial::new(quot))
}

fn signed_divisors(x: &BigInt) -> Option<Vec<BigInt>> {
    let fact = factorize(x).ok()?;
    let pos = divisors(&fact);
    Some(pos.iter().flat_map(|d| [d.clone(), -d]).collect())
}

struct Search<'a> {
    f: &'a Polynomial,
    nodes: Vec<BigInt>,
    choices: Vec<Vec<BigInt>>,
    deadline: Instant,
    timed_out: bool,
}

impl Search<'_> {
    /// Depth-first over values at the nodes, keeping Newton divided
    /// differences integral; an integer factor has integral ones.
    fn run(&mut self, level: usize, diffs: &mut Vec<BigInt>, table: &mut Vec<Vec<BigInt>>) -> Option<Polynomial> {
        let d = self.nodes.len() - 1;
        if level > d {
            if diffs[d].is_zero() {
                return None;
            }
            let g = self.newton_to_monomial(diffs);
            return exact_quotient(self.f, &g).map(|_| g);
        }
        if Instant::now() > self.deadline {
            self.timed_out = true;
            return None;
        }
        for idx in 0..self.choices[level].len() {
            let y = self.choices[level][idx].clone();
            // row[j] = g[x_{level-j}, ..., x_level]
            let mut row = vec![y];
            let mut ok = true;
            for j in 1..=level {
                let num = &row[j - 1] - &table[level - 1][j - 1];
                let den = &self.nodes[level] - &self.nodes[level - j];
                let (q, r) = num.div_rem(&den);
                if !r.is_zero() {
                    ok = false;
                    break;
                }
                row.push(q);
            }
            if !ok {
                continue;
            }
            diffs.push(row[level].clone());
            table.push(row);
            let found = self.run(level + 1, diffs, table);
            table.pop();
            diffs.pop();
            if found.is_some() || self.timed_out {
                return found;
            }
        }
        None
    }

    fn newton_to_monomial(&self, c: &[BigInt]) -> Polynomial {
        let mut g = Polynomial::constant(c[c.len() - 1].clone());
        for k in (0..c.len() - 1).rev() {
            let lin = Polynomial::new(vec![-&self.nodes[k], BigInt::one()]);
            g = &(&g * &lin) + &Polynomial::constant(c[k].clone());
        }
        g
    }
}

/// Kronecker's method: factors of degree `d` are interpolated through
/// divisors of `f` at `d + 1` integer nodes.
pub fn irreducible_bruteforce(f: &Polynomial) -> Result<Irreducibility> {
    irreducible_bruteforce_with_budget(f, KRONECKER_BUDGET)
}

pub fn irreducible_bruteforce_with_budget(f: &Polynomial, budget: Duration) -> Result<Irreducibility> {
    let n = f.degree();
    if f.is_zero() || n < 1 {
        return Err(Error::DegreeTooLow { required: 1, found: n });
    }
    if !f.content().is_one() {
        return Err(Error::NotApplicable("polynomial must be primitive".into()));
    }
    let deadline = Instant::now() + budget;
    let f = if f.leading().is_negative() { -f } else { f.clone() };
    if n == 1 {
        return Ok(Irreducibility::Irreducible);
    }

    // Nodes with few divisors keep the search small; an integer root is a
    // linear factor outright.
    let mut pool: Vec<(usize, BigInt, Vec<BigInt>)> = Vec::new();
    for k in 0..(4 * n as i64 + 8) {
        let x = BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
        let y = f.evaluate(&x);
        if y.is_zero() {
            return Ok(Irreducibility::Reducible(Polynomial::new(vec![-x, BigInt::one()])));
        }
        let Some(divs) = signed_divisors(&y) else { continue };
        pool.push((divs.len(), x, divs));
    }
    pool.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.abs().cmp(&b.1.abs())));

    for d in 1..=n / 2 {
        if pool.len() < d + 1 {
            return Ok(Irreducibility::OutOfReach);
        }
        let mut picked: Vec<(BigInt, Vec<BigInt>)> =
            pool[..=d].iter().map(|(_, x, v)| (x.clone(), v.clone())).collect();
        // g and -g are both factors: fix the sign at the first node
        picked[0].1.retain(|v| v.is_positive());
        let mut search = Search {
            f: &f,
            nodes: picked.iter().map(|p| p.0.clone()).collect(),
            choices: picked.into_iter().map(|p| p.1).collect(),
            deadline,
            timed_out: false,
        };
        let found = search.run(0, &mut Vec::new(), &mut Vec::new());
        if let Some(g) = found {
            let g = if g.leading().is_negative() { -&g } else { g };
            return Ok(Irreducibility::Reducible(g));
        }
        if search.timed_out {
            return Ok(Irreducibility::OutOfReach);
        }
    }
    Ok(Irreducibility::Irreducible)
}
