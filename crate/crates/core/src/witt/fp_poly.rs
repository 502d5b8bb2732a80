//! Dense polynomials over F_p, coefficients low-to-high.
//!
//! Only what the ring constructor needs: irreducibility testing and the
//! search for a default modulus.

use super::int::{mul_mod, pow_mod};

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

fn inv_mod_p(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = if p == 2 { 1 } else { inv_mod_p(f[df], p) };
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - df;
        for (i, &fi) in f.iter().enumerate().take(df + 1) {
            let t = mul_mod(c, fi, p);
            r[i + shift] = (r[i + shift] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    rem(&out, f, p)
}

fn pow_rem(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_rem(&result, &b, f, p);
        }
        b = mul_rem(&b, &b, f, p);
        e >>= 1;
    }
    rem(&result, f, p)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while degree(&b).is_some() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: a degree-d polynomial over F_p is irreducible iff it has no
/// common factor with x^{p^i} - x for 1 <= i <= d/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.iter().map(|c| c % p).collect());
    let d = match degree(&f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut frob = rem(&x, &f, p);
    for _ in 1..=d / 2 {
        frob = pow_rem(&frob, p, &f, p);
        let mut h = frob.clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = gcd(&f, &h, p);
        if degree(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// Lexicographically first monic irreducible polynomial of degree `a`
/// (constant coefficient varying fastest).
pub(crate) fn default_modulus(p: u64, a: u32) -> Vec<u64> {
    let a = a as usize;
    let mut coeffs = vec![0u64; a + 1];
    coeffs[a] = 1;
    loop {
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
            assert!(i < a, "no irreducible polynomial of degree {a} over F_{p}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibles() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2)); // (x+1)^2
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(is_irreducible(&[2, 4, 1], 5));
        assert!(!is_irreducible(&[4, 0, 1], 5)); // x^2 - 1
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2)); // (x^2+x+1)^2
    }

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(default_modulus(5, 2), vec![2, 0, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(7, 1), vec![0, 1]);
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // Number of monic irreducible quartics over F_2 is (16 - 4) / 4 = 3.
        let count = (0..16u64)
            .filter(|k| {
                let f = vec![k & 1, (k >> 1) & 1, (k >> 2) & 1, (k >> 3) & 1, 1];
                is_irreducible(&f, 2)
            })
            .count();
        assert_eq!(count, 3);
    }
}
