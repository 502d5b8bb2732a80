//! Truncated Witt vectors `W_n(F_{p^a})`, realized as the Galois ring
//! `Z/p^n[t]/(f)` for a monic lift `f` of an irreducible polynomial over F_p.
//!
//! Elements carry a shared handle to their ring. Equality is coordinate-wise
//! because every element is stored in canonical form: `a` coefficients of a
//! degree `< a` representative, each in `[0, p^n)`.
//!
//! The Frobenius `σ` is the unique ring automorphism with `σ(t) ≡ t^p mod p`.
//! It is found once per ring by Newton iteration on `f` and stored as the
//! matrix of `σ` on the basis `1, t, ..., t^{a-1}`.

mod coords;
mod divided;
pub(crate) mod fp_poly;
pub(crate) mod int;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use int::{checked_pow, inv_mod, is_prime, mul_mod, vp};

pub use coords::WittCoords;
pub use divided::{exp_term_bound, log_term_bound};

/// Parameters of `W_n(F_{p^a})`.
///
/// `modulus` is monic of degree `a`, low-to-high, coefficients reduced mod
/// `p^n`. For `a = 1` it is always `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingParams {
    pub p: u64,
    pub n: u32,
    pub a: u32,
    pub modulus: Vec<u64>,
}

impl RingParams {
    /// Validates and normalizes ring parameters. When `modulus` is `None` and
    /// `a > 1`, the lexicographically first irreducible polynomial is used.
    pub fn new(p: u64, n: u32, a: u32, modulus: Option<Vec<i64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 || a == 0 {
            return Err(Error::InvalidParams("n and a must be positive".into()));
        }
        let pn = checked_pow(p, n)
            .ok_or_else(|| Error::InvalidParams(format!("{p}^{n} exceeds 2^62")))?;
        checked_pow(p, a)
            .ok_or_else(|| Error::InvalidParams(format!("{p}^{a} exceeds 2^62")))?;
        let modulus = match (a, modulus) {
            (1, None) => vec![0, 1],
            (1, Some(m)) => {
                // A degree-one modulus t - c just renames the generator.
                if m.len() != 2 || m[1].rem_euclid(pn as i64) != 1 {
                    return Err(Error::InvalidParams("modulus must be monic of degree a".into()));
                }
                vec![0, 1]
            }
            (_, None) => fp_poly::default_modulus(p, a),
            (_, Some(m)) => {
                if m.len() != a as usize + 1 {
                    return Err(Error::InvalidParams(format!(
                        "modulus must have a + 1 = {} coefficients",
                        a + 1
                    )));
                }
                let m: Vec<u64> = m.iter().map(|&c| c.rem_euclid(pn as i64) as u64).collect();
                if m[a as usize] != 1 {
                    return Err(Error::InvalidParams("modulus must be monic".into()));
                }
                m
            }
        };
        let reduced: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if !fp_poly::is_irreducible(&reduced, p) {
            return Err(Error::ReducibleModulus(p));
        }
        Ok(RingParams { p, n, a, modulus })
    }

    /// `W_n(F_p) = Z/p^n`.
    pub fn prime_field(p: u64, n: u32) -> Result<Self> {
        Self::new(p, n, 1, None)
    }

    /// Same residue field and modulus, different precision.
    pub fn with_precision(&self, n: u32) -> Result<Self> {
        let modulus = (self.a > 1).then(|| self.modulus.iter().map(|&c| c as i64).collect());
        Self::new(self.p, n, self.a, modulus)
    }
}

/// A Galois ring `W_n(F_{p^a})` with its Frobenius precomputed.
#[derive(Debug)]
pub struct WittRing {
    params: RingParams,
    pn: u64,
    q: u64,
    /// Column `i` holds the coordinates of `σ(t^i)`.
    frob: Vec<Vec<u64>>,
    frob_inv: Vec<Vec<u64>>,
}

impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

impl Eq for WittRing {}

impl WittRing {
    pub fn new(params: RingParams) -> Arc<Self> {
        let pn = params.p.pow(params.n);
        let q = params.p.pow(params.a);
        let a = params.a as usize;
        let identity: Vec<Vec<u64>> = (0..a)
            .map(|i| (0..a).map(|j| u64::from(i == j)).collect())
            .collect();
        let mut ring = WittRing {
            params,
            pn,
            q,
            frob: identity.clone(),
            frob_inv: identity,
        };
        if a > 1 {
            let root = ring.frobenius_of_generator();
            let mut cols = Vec::with_capacity(a);
            let mut power = ring.one_coords();
            for _ in 0..a {
                cols.push(power.clone());
                power = ring.mul_coords(&power, &root);
            }
            ring.frob = cols;
            let mut inv = ring.frob.clone();
            for _ in 2..a {
                inv = ring.compose(&ring.frob, &inv);
            }
            ring.frob_inv = inv;
        }
        Arc::new(ring)
    }

    pub fn from_params(p: u64, n: u32, a: u32, modulus: Option<Vec<i64>>) -> Result<Arc<Self>> {
        Ok(Self::new(RingParams::new(p, n, a, modulus)?))
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn a(&self) -> u32 {
        self.params.a
    }

    /// `p^n`.
    pub fn modulus_int(&self) -> u64 {
        self.pn
    }

    /// Size of the residue field.
    pub fn residue_size(&self) -> u64 {
        self.q
    }

    /// The same ring at another precision.
    pub fn with_precision(&self, n: u32) -> Result<Arc<Self>> {
        Ok(Self::new(self.params.with_precision(n)?))
    }

    fn one_coords(&self) -> Vec<u64> {
        let mut c = vec![0; self.params.a as usize];
        c[0] = 1 % self.pn;
        c
    }

    fn mul_coords(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let a = self.params.a as usize;
        let m = self.pn;
        if a == 1 {
            return vec![mul_mod(x[0], y[0], m)];
        }
        let mut prod = vec![0u64; 2 * a - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(xi, yj, m)) % m;
            }
        }
        let f = &self.params.modulus;
        for d in (a..2 * a - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for k in 0..a {
                let sub = mul_mod(c, f[k], m);
                prod[d - a + k] = (prod[d - a + k] + m - sub) % m;
            }
        }
        prod.truncate(a);
        prod
    }

    fn apply(&self, mat: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        let a = self.params.a as usize;
        let m = self.pn;
        let mut out = vec![0u64; a];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (r, slot) in out.iter_mut().enumerate() {
                *slot = (*slot + mul_mod(xi, mat[i][r], m)) % m;
            }
        }
        out
    }

    fn compose(&self, outer: &[Vec<u64>], inner: &[Vec<u64>]) -> Vec<Vec<u64>> {
        inner.iter().map(|col| self.apply(outer, col)).collect()
    }

    /// Newton iteration for the root of the modulus lifting `t^p`.
    fn frobenius_of_generator(&self) -> Vec<u64> {
        let a = self.params.a as usize;
        let f = &self.params.modulus;
        let mut t = vec![0u64; a];
        t[1] = 1;
        let mut r = self.pow_coords(&t, self.params.p as u128);
        let mut df = vec![0u64; a + 1];
        for k in 1..=a {
            df[k - 1] = mul_mod(f[k], k as u64 % self.pn, self.pn);
        }
        for _ in 0..=self.params.n {
            let fr = self.eval_poly(f, &r);
            if fr.iter().all(|&c| c == 0) {
                break;
            }
            let dfr = self.eval_poly(&df, &r);
            let inv = self
                .inverse_coords(&dfr)
                .expect("derivative of a separable modulus is a unit");
            let step = self.mul_coords(&fr, &inv);
            r = r
                .iter()
                .zip(&step)
                .map(|(&x, &y)| (x + self.pn - y) % self.pn)
                .collect();
        }
        r
    }

    fn eval_poly(&self, poly: &[u64], x: &[u64]) -> Vec<u64> {
        let a = self.params.a as usize;
        let mut acc = vec![0u64; a];
        for &c in poly.iter().rev() {
            acc = self.mul_coords(&acc, x);
            acc[0] = (acc[0] + c) % self.pn;
        }
        acc
    }

    fn pow_coords(&self, x: &[u64], mut e: u128) -> Vec<u64> {
        let mut result = self.one_coords();
        let mut base = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_coords(&result, &base);
            }
            base = self.mul_coords(&base, &base);
            e >>= 1;
        }
        result
    }

    fn inverse_coords(&self, x: &[u64]) -> Option<Vec<u64>> {
        let p = self.params.p;
        if x.iter().all(|&c| c % p == 0) {
            return None;
        }
        if self.params.a == 1 {
            return inv_mod(x[0], self.pn).map(|v| vec![v]);
        }
        // x^{q-2} inverts x modulo p; Newton's y <- y(2 - xy) doubles precision.
        let mut y = self.pow_coords(x, self.q as u128 - 2);
        let mut digits = 1;
        while digits < self.params.n {
            let xy = self.mul_coords(x, &y);
            let mut two_minus = xy.iter().map(|&c| (self.pn - c) % self.pn).collect::<Vec<_>>();
            two_minus[0] = (two_minus[0] + 2) % self.pn;
            y = self.mul_coords(&y, &two_minus);
            digits *= 2;
        }
        Some(y)
    }

    pub fn zero(self: &Arc<Self>) -> WittElem {
        WittElem {
            ring: Arc::clone(self),
            coords: vec![0; self.params.a as usize],
        }
    }

    pub fn one(self: &Arc<Self>) -> WittElem {
        WittElem {
            ring: Arc::clone(self),
            coords: self.one_coords(),
        }
    }

    /// The image of an integer under `Z -> W_n(k)`.
    pub fn from_int(self: &Arc<Self>, x: i64) -> WittElem {
        let mut e = self.zero();
        e.coords[0] = (x as i128).rem_euclid(self.pn as i128) as u64;
        e
    }

    /// Element with the given polynomial coefficients, reduced mod `p^n`.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[i64]) -> Result<WittElem> {
        if coeffs.len() != self.params.a as usize {
            return Err(Error::Shape(format!(
                "element needs {} coefficients, got {}",
                self.params.a,
                coeffs.len()
            )));
        }
        Ok(WittElem {
            ring: Arc::clone(self),
            coords: coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(self.pn as i128) as u64)
                .collect(),
        })
    }

    /// The generator `t` (equal to `0` when `a = 1`).
    pub fn generator(self: &Arc<Self>) -> WittElem {
        let mut e = self.zero();
        if self.params.a > 1 {
            e.coords[1] = 1;
        } else {
            e.coords[0] = 0;
        }
        e
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> WittElem {
        WittElem {
            ring: Arc::clone(self),
            coords: (0..self.params.a).map(|_| rng.gen_range(0..self.pn)).collect(),
        }
    }

    pub fn random_unit<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> WittElem {
        loop {
            let x = self.random(rng);
            if x.is_unit() {
                return x;
            }
        }
    }

    /// All `q` residue-field elements as coordinate vectors over F_p.
    pub fn residue_elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let p = self.params.p;
        let a = self.params.a as usize;
        (0..self.q).map(move |mut k| {
            (0..a)
                .map(|_| {
                    let d = k % p;
                    k /= p;
                    d
                })
                .collect()
        })
    }

    /// Teichmüller lift of a residue-field element given by its coordinates
    /// in the basis `1, t, ..., t^{a-1}` over F_p: the unique `x` with
    /// `x^q = x` reducing to `c`.
    pub fn teichmuller(self: &Arc<Self>, c: &[u64]) -> Result<WittElem> {
        if c.len() != self.params.a as usize {
            return Err(Error::Shape(format!(
                "residue element needs {} coordinates",
                self.params.a
            )));
        }
        let p = self.params.p;
        let mut x: Vec<u64> = c.iter().map(|&d| d % p).collect();
        for _ in 0..self.params.n {
            x = self.pow_coords(&x, self.q as u128);
        }
        Ok(WittElem {
            ring: Arc::clone(self),
            coords: x,
        })
    }

    /// `exp(x) = Σ γ_m(x)` on the divided-power ideal `pW_n(k)`.
    pub fn dp_exp(self: &Arc<Self>, x: &WittElem) -> Result<WittElem> {
        divided::dp_exp(self, x)
    }

    /// Inverse of [`WittRing::dp_exp`] on `1 + pW_n(k)`.
    pub fn dp_log(self: &Arc<Self>, u: &WittElem) -> Result<WittElem> {
        divided::dp_log(self, u)
    }
}

/// An element of `W_n(F_{p^a})`.
#[derive(Clone)]
pub struct WittElem {
    ring: Arc<WittRing>,
    coords: Vec<u64>,
}

impl PartialEq for WittElem {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring.params == other.ring.params)
            && self.coords == other.coords
    }
}

impl Eq for WittElem {}

impl fmt::Debug for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "{:?}", self.coords)
        }
    }
}

impl WittElem {
    pub fn ring(&self) -> &Arc<WittRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.params == other.ring.params {
            Ok(())
        } else {
            Err(Error::IncompatibleRings)
        }
    }

    fn with_coords(&self, coords: Vec<u64>) -> WittElem {
        WittElem {
            ring: Arc::clone(&self.ring),
            coords,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<WittElem> {
        self.same_ring(other)?;
        let m = self.ring.pn;
        Ok(self.with_coords(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&x, &y)| (x + y) % m)
                .collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<WittElem> {
        self.same_ring(other)?;
        let m = self.ring.pn;
        Ok(self.with_coords(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(&x, &y)| (x + m - y) % m)
                .collect(),
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<WittElem> {
        self.same_ring(other)?;
        Ok(self.with_coords(self.ring.mul_coords(&self.coords, &other.coords)))
    }

    pub fn neg(&self) -> WittElem {
        let m = self.ring.pn;
        self.with_coords(self.coords.iter().map(|&x| (m - x) % m).collect())
    }

    pub fn pow(&self, e: u128) -> WittElem {
        self.with_coords(self.ring.pow_coords(&self.coords, e))
    }

    /// Multiplication by an integer.
    pub fn scale(&self, k: i64) -> WittElem {
        let m = self.ring.pn;
        let k = (k as i128).rem_euclid(m as i128) as u64;
        self.with_coords(self.coords.iter().map(|&x| mul_mod(x, k, m)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords == self.ring.one_coords()
    }

    pub fn is_unit(&self) -> bool {
        let p = self.ring.params.p;
        self.coords.iter().any(|&c| c % p != 0)
    }

    /// p-adic valuation, `None` for zero (valuation at least `n`).
    pub fn valuation(&self) -> Option<u32> {
        let p = self.ring.params.p;
        self.coords.iter().filter(|&&c| c != 0).map(|&c| vp(c, p)).min()
    }

    pub fn inverse(&self) -> Result<WittElem> {
        self.ring
            .inverse_coords(&self.coords)
            .map(|c| self.with_coords(c))
            .ok_or(Error::NotUnit)
    }

    /// Divides by `p^k`, assuming divisibility. The result is the canonical
    /// representative whose top `k` digits vanish.
    pub fn div_p_pow(&self, k: u32) -> Result<WittElem> {
        let d = self.ring.params.p.pow(k.min(self.ring.params.n));
        if self.coords.iter().any(|&c| c % d != 0) {
            return Err(Error::Domain(format!("element is not divisible by p^{k}")));
        }
        Ok(self.with_coords(self.coords.iter().map(|&c| c / d).collect()))
    }

    /// Reduction modulo `p`, as coordinates over F_p.
    pub fn residue(&self) -> Vec<u64> {
        let p = self.ring.params.p;
        self.coords.iter().map(|&c| c % p).collect()
    }

    pub fn frobenius(&self) -> WittElem {
        if self.ring.params.a == 1 {
            return self.clone();
        }
        self.with_coords(self.ring.apply(&self.ring.frob, &self.coords))
    }

    pub fn frobenius_inv(&self) -> WittElem {
        if self.ring.params.a == 1 {
            return self.clone();
        }
        self.with_coords(self.ring.apply(&self.ring.frob_inv, &self.coords))
    }

    /// `σ^k` for any integer `k`.
    pub fn frobenius_pow(&self, k: i64) -> WittElem {
        let a = self.ring.params.a as i64;
        let k = k.rem_euclid(a);
        let mut x = self.clone();
        for _ in 0..k {
            x = x.frobenius();
        }
        x
    }

    /// The same coordinates read in `target`, which must share `p`, `a` and
    /// the modulus; reduces or lifts canonically.
    pub fn to_ring(&self, target: &Arc<WittRing>) -> Result<WittElem> {
        let (s, t) = (&self.ring.params, &target.params);
        let modulus_agrees = s.modulus.iter().zip(&t.modulus).all(|(&x, &y)| {
            let m = s.p.pow(s.n.min(t.n));
            x % m == y % m
        });
        if s.p != t.p || s.a != t.a || !modulus_agrees {
            return Err(Error::IncompatibleRings);
        }
        Ok(WittElem {
            ring: Arc::clone(target),
            coords: self.coords.iter().map(|&c| c % target.pn).collect(),
        })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&WittElem> for &WittElem {
            type Output = WittElem;
            fn $method(self, rhs: &WittElem) -> WittElem {
                self.$checked(rhs).expect("operands from different rings")
            }
        }
        impl $tr<WittElem> for WittElem {
            type Output = WittElem;
            fn $method(self, rhs: WittElem) -> WittElem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&WittElem> for WittElem {
            type Output = WittElem;
            fn $method(self, rhs: &WittElem) -> WittElem {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &WittElem {
    type Output = WittElem;
    fn neg(self) -> WittElem {
        WittElem::neg(self)
    }
}

impl Neg for WittElem {
    type Output = WittElem;
    fn neg(self) -> WittElem {
        WittElem::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32, a: u32) -> Arc<WittRing> {
        WittRing::from_params(p, n, a, None).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(RingParams::new(4, 2, 1, None), Err(Error::NotPrime(4)));
        assert!(matches!(
            RingParams::new(2, 2, 2, Some(vec![1, 0, 1])),
            Err(Error::ReducibleModulus(2))
        ));
        assert!(RingParams::new(3, 0, 1, None).is_err());
        assert!(RingParams::new(2, 70, 1, None).is_err());
    }

    #[test]
    fn add_examples() {
        let r = ring(2, 2, 1);
        // Witt coordinates (1,0) correspond to 1.
        assert_eq!(r.from_int(1) + r.from_int(1), r.from_int(2));
        let r = ring(5, 3, 1);
        assert_eq!(r.from_int(60) + r.from_int(70), r.from_int(5));
        let x = r.from_int(17);
        assert_eq!(&x + &r.zero(), x);
    }

    #[test]
    fn mul_examples() {
        let r = ring(2, 3, 1);
        assert_eq!(r.from_int(2) * r.from_int(2), r.from_int(4));
        let r9 = ring(3, 2, 2);
        let x = r9.from_coeffs(&[4, 7]).unwrap();
        assert_eq!(&x * &r9.one(), x);
    }

    #[test]
    fn incompatible_rings() {
        let r = ring(5, 3, 1);
        let s = ring(5, 2, 1);
        assert_eq!(
            r.one().checked_add(&s.one()),
            Err(Error::IncompatibleRings)
        );
        assert_eq!(r.one().checked_mul(&s.one()), Err(Error::IncompatibleRings));
    }

    #[test]
    fn teichmuller_examples() {
        let r = ring(3, 2, 1);
        assert_eq!(r.teichmuller(&[2]).unwrap(), r.from_int(8));
        assert_eq!(r.teichmuller(&[0]).unwrap(), r.zero());
        assert_eq!(r.teichmuller(&[1]).unwrap(), r.one());
    }

    #[test]
    fn teichmuller_is_idempotent_under_q_power_in_f25() {
        let r = ring(5, 3, 2);
        for c in r.residue_elements() {
            let t = r.teichmuller(&c).unwrap();
            assert_eq!(t.pow(25), t);
            assert_eq!(t.residue(), c);
        }
    }

    #[test]
    fn teichmuller_is_multiplicative_in_f9() {
        let r = ring(3, 2, 2);
        let elems: Vec<_> = r.residue_elements().collect();
        for c in &elems {
            for d in &elems {
                let tc = r.teichmuller(c).unwrap();
                let td = r.teichmuller(d).unwrap();
                let cd = (&tc * &td).residue();
                assert_eq!(&tc * &td, r.teichmuller(&cd).unwrap());
            }
        }
    }

    #[test]
    fn frobenius_on_teichmuller_in_f8() {
        let r = ring(2, 2, 3);
        for c in r.residue_elements() {
            let t = r.teichmuller(&c).unwrap();
            let tp = r.teichmuller(&t.pow(2).residue()).unwrap();
            assert_eq!(t.frobenius(), tp);
        }
    }

    #[test]
    fn frobenius_is_identity_over_prime_field() {
        let r = ring(7, 3, 1);
        for k in 0..343 {
            let x = r.from_int(k);
            assert_eq!(x.frobenius(), x);
        }
    }

    #[test]
    fn frobenius_has_order_a() {
        use rand::SeedableRng;
        let r = ring(3, 3, 2);
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let x = r.random(&mut rng);
            assert_eq!(x.frobenius().frobenius(), x);
            assert_ne!(r.generator().frobenius(), r.generator());
            assert_eq!(x.frobenius().frobenius_inv(), x);
        }
    }

    #[test]
    fn frobenius_with_custom_modulus() {
        let r = WittRing::from_params(5, 3, 2, Some(vec![2, 4, 1])).unwrap();
        let t = r.generator();
        let f = |x: &WittElem| &(&(x * x) + &x.scale(4)) + &r.from_int(2);
        assert!(f(&t).is_zero());
        assert!(f(&t.frobenius()).is_zero());
        assert_eq!(t.frobenius().residue(), t.pow(5).residue());
    }

    #[test]
    fn inverse_and_valuation() {
        let r = ring(3, 4, 3);
        let t = r.generator();
        let u = &t + &r.from_int(1);
        assert_eq!(&u * &u.inverse().unwrap(), r.one());
        assert_eq!(r.from_int(9).valuation(), Some(2));
        assert_eq!(r.zero().valuation(), None);
        assert_eq!(r.from_int(3).inverse(), Err(Error::NotUnit));
        let x = r.from_int(18);
        assert_eq!(x.div_p_pow(2).unwrap(), r.from_int(2));
        assert!(r.from_int(2).div_p_pow(1).is_err());
    }

    #[test]
    fn precision_change_round_trip() {
        let r = ring(5, 3, 2);
        let s = r.with_precision(5).unwrap();
        let x = r.from_coeffs(&[7, 101]).unwrap();
        assert_eq!(x.to_ring(&s).unwrap().to_ring(&r).unwrap(), x);
    }
}
