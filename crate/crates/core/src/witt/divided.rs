//! Divided-power exponential and logarithm on `pW_n(k)`, `p` odd.
//!
//! For `x = p·y` the divided power `γ_m(x) = x^m / m!` equals
//! `p^{m - v_p(m!)} · y^m · u_m^{-1}` where `m! = p^{v_p(m!)} u_m`. The value
//! does not depend on the representative chosen for `y`, so the series is
//! evaluated exactly inside `W_n(k)` with no precision loss. The logarithm
//! uses `(m-1)!·γ_m(y) = y^m / m` in the same way.

use std::sync::Arc;

use super::int::{inv_mod, vp, vp_factorial};
use super::{WittElem, WittRing};
use crate::error::{Error, Result};

/// Smallest `M` with `m - v_p(m!) >= n` for every `m >= M`: the exponential
/// series truncated below `M` is exact in `W_n`.
pub fn exp_term_bound(p: u64, n: u32) -> u64 {
    assert!(p >= 3);
    let n = n as u64;
    // v_p(m!) <= (m-1)/(p-1), so m - v_p(m!) >= ((p-2)m + 1)/(p-1).
    let mut bound = (n * (p - 1)).saturating_sub(1).div_ceil(p - 2).max(1);
    while bound > 1 && (bound - 1) - vp_factorial(bound - 1, p) >= n {
        bound -= 1;
    }
    bound
}

/// Smallest `M >= 1` with `m - v_p(m) >= n` for every `m >= M`.
pub fn log_term_bound(p: u64, n: u32) -> u64 {
    let n = n as u64;
    let floor_log = |m: u64| {
        let mut k = 0;
        let mut x = m;
        while x >= p {
            x /= p;
            k += 1;
        }
        k
    };
    // m - floor(log_p m) is non-decreasing and bounds m - v_p(m) from below.
    let mut bound = 1;
    while bound - floor_log(bound) < n {
        bound += 1;
    }
    while bound > 1 && (bound - 1) - vp(bound - 1, p) as u64 >= n {
        bound -= 1;
    }
    bound
}

fn check_characteristic(ring: &WittRing) -> Result<()> {
    if ring.p() == 2 {
        Err(Error::UnsupportedCharacteristic(2))
    } else {
        Ok(())
    }
}

/// `p^e · y^m · c^{-1}` for an integer `c` prime to `p`.
fn scaled_power(ring: &Arc<WittRing>, y: &WittElem, m: u64, e: u64, unit: u64) -> WittElem {
    let pn = ring.modulus_int();
    let inv = inv_mod(unit % pn, pn).expect("unit part is prime to p");
    let pe = ring.p().pow(e as u32) as i64;
    y.pow(m as u128).scale(pe).scale(inv as i64)
}

pub(super) fn dp_exp(ring: &Arc<WittRing>, x: &WittElem) -> Result<WittElem> {
    check_characteristic(ring)?;
    if x.ring() != ring {
        return Err(Error::IncompatibleRings);
    }
    if x.is_unit() {
        return Err(Error::Domain("exp needs an element of pW_n(k)".into()));
    }
    let p = ring.p();
    let n = ring.n() as u64;
    let y = x.div_p_pow(1)?;
    let mut sum = ring.one();
    let mut unit_fact: u64 = 1;
    let pn = ring.modulus_int();
    for m in 1..exp_term_bound(p, ring.n()) {
        let v = vp(m, p);
        unit_fact = super::int::mul_mod(unit_fact, (m / p.pow(v)) % pn, pn);
        let e = m - vp_factorial(m, p);
        if e >= n {
            continue;
        }
        sum = &sum + &scaled_power(ring, &y, m, e, unit_fact);
    }
    Ok(sum)
}

pub(super) fn dp_log(ring: &Arc<WittRing>, u: &WittElem) -> Result<WittElem> {
    check_characteristic(ring)?;
    if u.ring() != ring {
        return Err(Error::IncompatibleRings);
    }
    let w = u - &ring.one();
    if w.is_unit() {
        return Err(Error::Domain("log needs an element of 1 + pW_n(k)".into()));
    }
    let p = ring.p();
    let n = ring.n() as u64;
    let z = w.div_p_pow(1)?;
    let mut sum = ring.zero();
    for m in 1..log_term_bound(p, ring.n()) {
        let v = vp(m, p) as u64;
        let e = m - v;
        if e >= n {
            continue;
        }
        let term = scaled_power(ring, &z, m, e, m / p.pow(v as u32));
        sum = if m % 2 == 1 { &sum + &term } else { &sum - &term };
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32, a: u32) -> Arc<WittRing> {
        WittRing::from_params(p, n, a, None).unwrap()
    }

    /// Brute-force bound: scan far past any plausible threshold.
    fn brute_bound(n: u32, p: u64, f: impl Fn(u64) -> u64) -> u64 {
        let horizon = 50 * (n as u64 + 2) * p;
        let mut last_bad = 0;
        for m in 1..horizon {
            if f(m) < n as u64 {
                last_bad = m;
            }
        }
        last_bad + 1
    }

    #[test]
    fn bounds_match_brute_force() {
        for p in [3u64, 5, 7, 11] {
            for n in 1..8 {
                assert_eq!(
                    exp_term_bound(p, n),
                    brute_bound(n, p, |m| m - vp_factorial(m, p)).max(1),
                    "exp p={p} n={n}"
                );
                assert_eq!(
                    log_term_bound(p, n),
                    brute_bound(n, p, |m| m - vp(m, p) as u64).max(1),
                    "log p={p} n={n}"
                );
            }
        }
    }

    #[test]
    fn exp_examples() {
        let r = ring(5, 3, 1);
        assert_eq!(r.dp_exp(&r.zero()).unwrap(), r.one());
        assert_eq!(r.dp_exp(&r.from_int(5)).unwrap(), r.from_int(81));
        assert_eq!(r.dp_log(&r.from_int(81)).unwrap(), r.from_int(5));
        assert_eq!(r.dp_log(&r.one()).unwrap(), r.zero());
    }

    #[test]
    fn exp_is_a_homomorphism_in_w4_f7() {
        let r = ring(7, 4, 1);
        let e = r.dp_exp(&r.from_int(7)).unwrap();
        assert_eq!(&e * &e, r.dp_exp(&r.from_int(14)).unwrap());
    }

    #[test]
    fn domain_errors() {
        let r = ring(2, 3, 1);
        assert_eq!(
            r.dp_exp(&r.from_int(2)),
            Err(Error::UnsupportedCharacteristic(2))
        );
        let r = ring(5, 3, 1);
        assert!(matches!(r.dp_exp(&r.from_int(1)), Err(Error::Domain(_))));
        assert!(matches!(r.dp_log(&r.from_int(2)), Err(Error::Domain(_))));
    }
}
