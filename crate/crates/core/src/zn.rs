//! Arithmetic in the residue ring Z/nZ.

use crate::error::{Error, Result};

/// A modulus `n >= 2` for the residue ring Z/nZ.
///
/// Residues are stored as canonical representatives in `0..n`. The modulus is
/// bounded so that products of two residues fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    /// Largest supported modulus (exclusive).
    pub const LIMIT: u64 = 1 << 31;

    /// Creates a modulus, rejecting `n < 2` and `n >= LIMIT`.
    pub fn new(n: u64) -> Result<Self> {
        if !(2..Self::LIMIT).contains(&n) {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    /// The integer `n`.
    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// Canonical representative of an unsigned integer.
    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    /// Canonical representative of a signed integer.
    #[inline]
    pub fn reduce_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    /// Canonical representative of a wide signed integer.
    #[inline]
    pub fn reduce_i128(self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    /// `a * x + b * y` reduced.
    #[inline]
    pub fn lin2(self, a: u64, x: u64, b: u64, y: u64) -> u64 {
        (a * x + b * y) % self.0
    }

    /// `gcd(a, n)`, which is `n` for `a = 0`.
    pub fn gcd_with(self, a: u64) -> u64 {
        gcd(a % self.0, self.0)
    }

    /// Whether `a` is invertible modulo `n`.
    pub fn is_unit(self, a: u64) -> bool {
        gcd(a % self.0, self.0) == 1
    }

    /// Multiplicative inverse, if it exists.
    pub fn inv(self, a: u64) -> Option<u64> {
        let (g, s, _) = xgcd((a % self.0) as i64, self.0 as i64);
        if g != 1 {
            return None;
        }
        Some(self.reduce_i64(s))
    }

    /// Returns `(g, u)` where `g = gcd(a, n)` and `u` is a unit with `u * a = g`.
    ///
    /// For `a = 0` this is `(0, 1)`, the residue of `n`.
    pub fn unit_normalizer(self, a: u64) -> (u64, u64) {
        let n = self.0;
        let a = a % n;
        if a == 0 {
            return (0, 1);
        }
        let g = gcd(a, n);
        let n1 = n / g;
        let a1 = a / g;
        let u0 = if n1 == 1 {
            0
        } else {
            let (_, s, _) = xgcd(a1 as i64, n1 as i64);
            (s.rem_euclid(n1 as i64)) as u64
        };
        let mut u = u0;
        while gcd(u, n) != 1 {
            u += n1;
        }
        (g % n, u % n)
    }

    /// Whether `n` is prime.
    pub fn is_prime(self) -> bool {
        let n = self.0;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    /// Whether `a` divides `b` in Z/nZ.
    pub fn divides(self, a: u64, b: u64) -> bool {
        b.is_multiple_of(self.gcd_with(a))
    }
}

/// Greatest common divisor with `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, s, t)` with `s * a + t * b = g = gcd(a, b) >= 0`.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizer_gives_gcd() {
        for n in 2..40u64 {
            let m = Modulus::new(n).unwrap();
            for a in 0..n {
                let (g, u) = m.unit_normalizer(a);
                assert!(m.is_unit(u));
                assert_eq!(m.mul(u, a), g);
                assert_eq!(g, gcd(a, n) % n);
            }
        }
    }

    #[test]
    fn inverses() {
        let m = Modulus::new(9).unwrap();
        assert_eq!(m.inv(2), Some(5));
        assert_eq!(m.inv(3), None);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(Modulus::LIMIT).is_err());
    }
}
