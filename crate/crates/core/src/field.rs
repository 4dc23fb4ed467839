//! Arithmetic in GF(q), q = p^k.
//!
//! Elements are the integers `0..q`, read as coefficient vectors in base p with
//! the constant term in the least significant digit. For k ≥ 2 the reduction
//! polynomial is the lexicographically smallest monic irreducible of degree k,
//! comparing coefficients from the constant term upward.

use crate::error::{Error, Result};

/// Orders up to this size get full operation tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, constant term first, length k + 1.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Returns `(p, k)` with `q = p^k`, or `None` when q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl Field {
    /// Builds GF(q). Fails with `NotPrimePower` for other orders.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > u32::MAX as u64 / 2 {
            return Err(Error::BadRange(format!("field order {q} too large")));
        }
        let p = p as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, k as usize)
        };
        let mut field = Field {
            p,
            k,
            q: q as u32,
            modulus,
            tables: None,
        };
        if field.q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => self.neg_slow(a),
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => t.inv[a as usize],
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        self.from_digits(&sum)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let d: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.from_digits(&d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; da.len() + db.len() - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let rem = poly_rem(&prod, &self.modulus, self.p);
        let mut digits = vec![0; self.k as usize];
        digits[..rem.len()].copy_from_slice(&rem);
        self.from_digits(&digits)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..self.q {
            for b in 0..self.q {
                add[a as usize * q + b as usize] = self.add_slow(a, b);
                mul[a as usize * q + b as usize] = self.mul_slow(a, b);
            }
        }
        let neg = (0..self.q).map(|a| self.neg_slow(a)).collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .expect("field has inverses") as u32;
        }
        Tables { add, mul, neg, inv }
    }
}

/// Remainder of `a` modulo monic `m` over GF(p); coefficients constant term first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let deg_m = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    while r.len() > deg_m {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = r.len() - deg_m;
        for (i, &c) in m[..deg_m].iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - lead) * c as u64) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let mut low = vec![0u32; d];
        loop {
            let mut divisor = low.clone();
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
            if !next_coefficients(&mut low, p) {
                break;
            }
        }
    }
    true
}

/// Advances the coefficient vector so that index 0 varies slowest.
fn next_coefficients(c: &mut [u32], p: u32) -> bool {
    for i in (0..c.len()).rev() {
        c[i] += 1;
        if c[i] < p {
            return true;
        }
        c[i] = 0;
    }
    false
}

fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let mut low = vec![0u32; k];
    loop {
        let mut candidate = low.clone();
        candidate.push(1);
        if is_irreducible(&candidate, p) {
            return candidate;
        }
        assert!(
            next_coefficients(&mut low, p),
            "irreducible polynomials exist in every degree"
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert!(matches!(Field::new(6), Err(Error::NotPrimePower(6))));
        assert!(matches!(Field::new(12), Err(Error::NotPrimePower(12))));
    }

    #[test]
    fn gf4_modulus_and_product() {
        // the four monic quadratics over GF(2) are x², x²+1, x²+x, x²+x+1;
        // only the last has no root
        let gf4 = Field::new(4).unwrap();
        assert_eq!((gf4.p(), gf4.k()), (2, 2));
        assert_eq!(gf4.modulus(), &[1, 1, 1]);
        assert_eq!(gf4.mul(2, 2), 3);
    }

    #[test]
    fn smallest_modulus_ordering() {
        // over GF(3), x²+1 has constant term 1, the smallest possible for an irreducible
        assert_eq!(Field::new(9).unwrap().modulus(), &[1, 0, 1]);
        // over GF(2), x³+x²+1 = [1,0,1,1] precedes x³+x+1 = [1,1,0,1]
        assert_eq!(Field::new(8).unwrap().modulus(), &[1, 0, 1, 1]);
        // x⁴+1 = (x+1)⁴, so x⁴+x³+1 is first
        assert_eq!(Field::new(16).unwrap().modulus(), &[1, 0, 0, 1, 1]);
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn prime_field_basics() {
        let gf5 = Field::new(5).unwrap();
        assert_eq!(gf5.inv(2).unwrap(), 3);
        assert!(matches!(gf5.inv(0), Err(Error::DivisionByZero)));
        for a in gf5.elements() {
            assert_eq!(gf5.add(a, gf5.neg(a)), 0);
        }
    }

    #[test]
    fn untabled_field_agrees_with_tables() {
        let big = Field::new(257 * 257).unwrap();
        let a = 12345;
        let b = 54321;
        assert_eq!(big.mul(a, b), big.mul(b, a));
        assert_eq!(big.mul(a, big.inv(a).unwrap()), 1);
        let gf27 = Field::new(27).unwrap();
        let mut slow = gf27.clone();
        slow.tables = None;
        for a in gf27.elements() {
            for b in gf27.elements() {
                assert_eq!(gf27.mul(a, b), slow.mul(a, b));
                assert_eq!(gf27.add(a, b), slow.add(a, b));
            }
        }
    }

    fn prime_powers_up_to(limit: u64) -> Vec<u64> {
        (2..=limit).filter(|&q| prime_power(q).is_some()).collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in prime_powers_up_to(64) {
            let f = Field::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                    assert_eq!(f.pow(a, q - 1), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for q in prime_powers_up_to(32) {
            let f = Field::new(q).unwrap();
            let p = f.p() as u64;
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                }
            }
        }
    }
}
