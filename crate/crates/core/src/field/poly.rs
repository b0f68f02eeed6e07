//! Dense polynomials over the prime field Z/p, used by the Laurent backend.

/// Polynomial over Z/p. Coefficients are stored lowest degree first with no
/// trailing zeros; the zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p for prime p.
    debug_assert!(!a.is_multiple_of(p));
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl FpPoly {
    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        let c = c % p;
        if c == 0 {
            Self::zero(p)
        } else {
            FpPoly { p, coeffs: vec![c] }
        }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    /// Builds from (exponent, coefficient) pairs; exponents must be >= 0.
    pub fn from_terms(p: u64, terms: &[(usize, u64)]) -> Self {
        let mut coeffs = vec![0u64; terms.iter().map(|t| t.0 + 1).max().unwrap_or(0)];
        for &(e, c) in terms {
            coeffs[e] = (coeffs[e] + c) % p;
        }
        let mut out = FpPoly { p, coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order at t: index of the lowest nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading() == 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn add(&self, rhs: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, rhs.p);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![0u64; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *c = (a + b) % self.p;
        }
        let mut out = FpPoly { p: self.p, coeffs };
        out.trim();
        out
    }

    pub fn neg(&self) -> FpPoly {
        let coeffs = self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        FpPoly { p: self.p, coeffs }
    }

    pub fn sub(&self, rhs: &FpPoly) -> FpPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, rhs.p);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + a * b) % self.p;
            }
        }
        let mut out = FpPoly { p: self.p, coeffs };
        out.trim();
        out
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p);
        }
        let coeffs = self.coeffs.iter().map(|&a| a * c % self.p).collect();
        FpPoly { p: self.p, coeffs }
    }

    /// Multiplies by t^k (k >= 0).
    pub fn shift(&self, k: usize) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0u64; k];
        coeffs.extend_from_slice(&self.coeffs);
        FpPoly { p: self.p, coeffs }
    }

    /// Euclidean division: self = q * d + r with deg r < deg d.
    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let p = self.p;
        let dd = d.deg().unwrap();
        let inv_lead = inv_mod_p(d.leading(), p);
        let mut r = self.clone();
        let mut q = FpPoly::zero(p);
        while let Some(rd) = r.deg() {
            if rd < dd {
                break;
            }
            let c = r.leading() * inv_lead % p;
            let k = rd - dd;
            q = q.add(&FpPoly::from_terms(p, &[(k, c)]));
            r = r.sub(&d.mul(&FpPoly::from_terms(p, &[(k, c)])));
        }
        (q, r)
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let c = inv_mod_p(a.leading(), a.p);
            a.scale(c)
        }
    }

    /// Truncated power-series inverse mod t^k; requires a nonzero constant term.
    pub fn inv_series(&self, k: usize) -> FpPoly {
        let p = self.p;
        assert!(self.coeffs.first().map(|&c| c != 0).unwrap_or(false));
        let a0_inv = inv_mod_p(self.coeffs[0], p);
        let mut inv = vec![0u64; k];
        if k == 0 {
            return FpPoly::zero(p);
        }
        inv[0] = a0_inv;
        for n in 1..k {
            // coefficient n of self * inv must vanish
            let mut s = 0u64;
            for i in 1..=n {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                s = (s + a * inv[n - i]) % p;
            }
            inv[n] = (p - s) % p * a0_inv % p;
        }
        let mut out = FpPoly { p, coeffs: inv };
        out.trim();
        out
    }

    /// Keeps coefficients of degree < k.
    pub fn truncated(&self, k: usize) -> FpPoly {
        let mut out = FpPoly {
            p: self.p,
            coeffs: self.coeffs.iter().take(k).copied().collect(),
        };
        out.trim();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let p = 5;
        let a = FpPoly::from_terms(p, &[(0, 2), (1, 3), (3, 4)]);
        let d = FpPoly::from_terms(p, &[(0, 1), (1, 2)]);
        let (q, r) = a.divrem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.deg() < d.deg());
    }

    #[test]
    fn gcd_is_monic_common_divisor() {
        let p = 3;
        let f = FpPoly::from_terms(p, &[(0, 1), (1, 1)]); // 1 + t
        let a = f.mul(&FpPoly::from_terms(p, &[(0, 2), (2, 1)]));
        let b = f.mul(&FpPoly::from_terms(p, &[(1, 1)]));
        let g = a.gcd(&b);
        assert!(g.is_monic());
        assert!(a.divrem(&g).1.is_zero());
        assert!(b.divrem(&g).1.is_zero());
    }

    #[test]
    fn series_inverse() {
        let p = 5;
        let f = FpPoly::from_terms(p, &[(0, 2), (1, 1), (2, 3)]);
        let inv = f.inv_series(6);
        let prod = f.mul(&inv).truncated(6);
        assert_eq!(prod, FpPoly::one(p));
    }
}
