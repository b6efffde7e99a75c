//! Clebsch–Gordan coefficients from the Racah closed form.
//!
//! Every factorial is carried as a vector of prime exponents, so the
//! alternating sum is evaluated in exact integer arithmetic and the only
//! floating-point step is the final square root of a rational number.

use std::cell::RefCell;

use rustc_hash::FxHashMap;

use super::halfint::{triangle, HalfInt};
use super::RepError;

/// Largest factorial argument supported (covers spins well beyond any
/// Hilbert-space truncation that fits in memory).
const MAX_FACTORIAL: usize = 200;

fn primes() -> &'static [u32] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = MAX_FACTORIAL + 1;
        let mut sieve = vec![true; n + 1];
        let mut out = Vec::new();
        for p in 2..=n {
            if sieve[p] {
                out.push(p as u32);
                let mut q = p * p;
                while q <= n {
                    sieve[q] = false;
                    q += p;
                }
            }
        }
        out
    })
}

/// Prime-exponent vector of `n!` (Legendre's formula).
fn factorial_exponents(n: usize) -> Vec<i32> {
    assert!(n <= MAX_FACTORIAL, "factorial argument {n} exceeds {MAX_FACTORIAL}");
    primes()
        .iter()
        .map(|&p| {
            let p = p as usize;
            let mut e = 0;
            let mut q = p;
            while q <= n {
                e += (n / q) as i32;
                q *= p;
            }
            e
        })
        .collect()
}

fn accumulate(target: &mut [i32], src: &[i32], sign: i32) {
    for (t, s) in target.iter_mut().zip(src) {
        *t += sign * s;
    }
}

/// Evaluate `prod p^e` for possibly negative exponents.
fn eval_exponents(exps: &[i32]) -> f64 {
    let mut num = 1.0f64;
    let mut den = 1.0f64;
    for (&p, &e) in primes().iter().zip(exps) {
        if e > 0 {
            num *= f64::from(p).powi(e);
        } else if e < 0 {
            den *= f64::from(p).powi(-e);
        }
    }
    num / den
}

/// Integer value of `prod p^e` for non-negative exponents.
fn int_from_exponents(exps: &[i32]) -> i128 {
    let mut v: i128 = 1;
    for (&p, &e) in primes().iter().zip(exps) {
        for _ in 0..e {
            v = v.checked_mul(i128::from(p)).expect("Racah sum overflow");
        }
    }
    v
}

fn as_index(twice_sum: i32) -> Option<usize> {
    if twice_sum < 0 || twice_sum % 2 != 0 {
        None
    } else {
        Some((twice_sum / 2) as usize)
    }
}

fn racah(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
    // All arguments are twice the physical values.
    let f = |t: i32| as_index(t).expect("non-integer factorial argument");
    let mut pre = factorial_exponents(f(j1 + j2 - j));
    accumulate(&mut pre, &factorial_exponents(f(j1 - j2 + j)), 1);
    accumulate(&mut pre, &factorial_exponents(f(-j1 + j2 + j)), 1);
    accumulate(&mut pre, &factorial_exponents(f(j1 + j2 + j + 2)), -1);
    for t in [j + m, j - m, j1 - m1, j1 + m1, j2 - m2, j2 + m2] {
        accumulate(&mut pre, &factorial_exponents(f(t)), 1);
    }

    // Summation range over k.
    let args = |k: i32| {
        [
            k,
            (j1 + j2 - j) / 2 - k,
            (j1 - m1) / 2 - k,
            (j2 + m2) / 2 - k,
            (j - j2 + m1) / 2 + k,
            (j - j1 - m2) / 2 + k,
        ]
    };
    let kmin = 0.max(-(j - j2 + m1) / 2).max(-(j - j1 - m2) / 2);
    let kmax = ((j1 + j2 - j) / 2).min((j1 - m1) / 2).min((j2 + m2) / 2);
    if kmin > kmax {
        return 0.0;
    }
    let denoms: Vec<Vec<i32>> = (kmin..=kmax)
        .map(|k| {
            let mut d = vec![0; primes().len()];
            for a in args(k) {
                accumulate(&mut d, &factorial_exponents(a as usize), 1);
            }
            d
        })
        .collect();
    // Common denominator: elementwise maximum exponent.
    let mut lcm = vec![0; primes().len()];
    for d in &denoms {
        for (l, &e) in lcm.iter_mut().zip(d) {
            *l = (*l).max(e);
        }
    }
    let mut sum: i128 = 0;
    for (k, d) in (kmin..=kmax).zip(&denoms) {
        let quotient: Vec<i32> = lcm.iter().zip(d).map(|(l, e)| l - e).collect();
        let term = int_from_exponents(&quotient);
        sum = if k % 2 == 0 { sum.checked_add(term) } else { sum.checked_sub(term) }
            .expect("Racah sum overflow");
    }
    if sum == 0 {
        return 0.0;
    }
    // value = sum / lcm * sqrt((2j+1) * pre)
    let mut radicand = pre;
    accumulate(&mut radicand, &lcm, -2);
    let root = (f64::from(j + 1) * eval_exponents(&radicand)).sqrt();
    sum as f64 * root
}

thread_local! {
    static CG_CACHE: RefCell<FxHashMap<[i32; 6], f64>> = RefCell::new(FxHashMap::default());
}

/// `<j1 m1; j2 m2 | j m>` in the Condon–Shortley convention.
///
/// Returns zero when `m != m1 + m2` or the triangle rule fails, and an error
/// when a magnetic label is incompatible with its spin.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64, RepError> {
    for (jj, mm) in [(j1, m1), (j2, m2), (j, m)] {
        if !jj.admits(mm) {
            return Err(RepError::InvalidProjection { j: jj, m: mm });
        }
    }
    if m1 + m2 != m || !triangle(j1, j2, j) {
        return Ok(0.0);
    }
    let key = [j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice()];
    Ok(CG_CACHE.with(|cache| {
        if let Some(&v) = cache.borrow().get(&key) {
            return v;
        }
        let v = racah(key[0], key[1], key[2], key[3], key[4], key[5]);
        cache.borrow_mut().insert(key, v);
        v
    }))
}

/// Alias of [`clebsch_gordan`].
pub fn cg_coefficient(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64, RepError> {
    clebsch_gordan(j1, m1, j2, m2, j, m)
}

/// Infallible variant for callers that construct labels from valid ranges.
pub fn cg(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    clebsch_gordan(j1, m1, j2, m2, j, m).unwrap_or(0.0)
}
