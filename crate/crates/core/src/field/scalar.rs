//! Canonical scalar values and their arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{inv_mod_p, FpPoly};
use super::{Backend, Field, FieldError, Valuation};

/// An exact element of the configured local field.
///
/// Canonical form is unique per field value: reduced fraction with positive
/// denominator for Q_p, reduced fraction with monic denominator for F_p(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Q { p: u64, r: BigRational },
    L { num: FpPoly, den: FpPoly },
}

fn bigint_val(n: &BigInt, p: u64) -> u64 {
    // exponent of p in n; n must be nonzero
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0u64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

impl Field {
    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    /// Image of an ordinary integer in the field.
    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(&self, n: BigInt) -> Scalar {
        match self.backend() {
            Backend::Qp => Scalar {
                repr: Repr::Q {
                    p: self.p(),
                    r: BigRational::from_integer(n),
                },
            },
            Backend::Laurent => {
                let p = BigInt::from(self.p());
                let c = n.mod_floor(&p);
                let c = u64::try_from(c).expect("residue fits in u64");
                Scalar::from_laurent(FpPoly::constant(self.p(), c), FpPoly::one(self.p()))
            }
        }
    }

    pub fn from_ratio(&self, a: i64, b: i64) -> Result<Scalar, FieldError> {
        if b == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let num = self.from_int(a);
        let den = self.from_int(b);
        Ok(&num * &den.inv()?)
    }

    /// The uniformizer: p for Q_p, t for F_p((t)).
    pub fn uniformizer(&self) -> Scalar {
        self.uniformizer_pow(1)
    }

    pub fn uniformizer_pow(&self, k: i64) -> Scalar {
        match self.backend() {
            Backend::Qp => {
                let p = BigInt::from(self.p());
                let pk = p.pow(k.unsigned_abs() as u32);
                let r = if k >= 0 {
                    BigRational::from_integer(pk)
                } else {
                    BigRational::new(BigInt::one(), pk)
                };
                Scalar {
                    repr: Repr::Q { p: self.p(), r },
                }
            }
            Backend::Laurent => {
                let mono = FpPoly::from_terms(self.p(), &[(k.unsigned_abs() as usize, 1)]);
                if k >= 0 {
                    Scalar::from_laurent(mono, FpPoly::one(self.p()))
                } else {
                    Scalar::from_laurent(FpPoly::one(self.p()), mono)
                }
            }
        }
    }

    /// Sum of digits[i] * uniformizer^(lowest + i), digits taken mod p.
    pub fn from_digits(&self, lowest: i64, digits: &[u64]) -> Scalar {
        let mut acc = self.zero();
        for (i, &d) in digits.iter().enumerate() {
            if d % self.p() == 0 {
                continue;
            }
            let term = &self.from_int((d % self.p()) as i64) * &self.uniformizer_pow(lowest + i as i64);
            acc = &acc + &term;
        }
        acc
    }
}

impl Scalar {
    fn from_laurent(num: FpPoly, den: FpPoly) -> Scalar {
        let p = num.p;
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Scalar {
                repr: Repr::L {
                    num,
                    den: FpPoly::one(p),
                },
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let c = inv_mod_p(den.leading(), p);
        Scalar {
            repr: Repr::L {
                num: num.scale(c),
                den: den.scale(c),
            },
        }
    }

    pub fn field(&self) -> Field {
        match &self.repr {
            Repr::Q { p, .. } => Field::new(Backend::Qp, *p).expect("valid field"),
            Repr::L { num, .. } => Field::new(Backend::Laurent, num.p).expect("valid field"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Q { r, .. } => r.is_zero(),
            Repr::L { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Q { r, .. } => r.is_one(),
            Repr::L { num, den } => num.is_monic() && num.deg() == Some(0) && den.is_one(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.valuation() >= Valuation::Finite(0)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Q { p, r } => {
                if r.is_zero() {
                    return Valuation::Infinity;
                }
                let vn = bigint_val(r.numer(), *p) as i64;
                let vd = bigint_val(r.denom(), *p) as i64;
                Valuation::Finite(vn - vd)
            }
            Repr::L { num, den } => match num.ord() {
                None => Valuation::Infinity,
                Some(a) => Valuation::Finite(a as i64 - den.ord().unwrap() as i64),
            },
        }
    }

    /// Image in the residue field o/p, as an integer in 0..p.
    pub fn residue(&self) -> Result<u64, FieldError> {
        match self.valuation() {
            Valuation::Infinity => Ok(0),
            Valuation::Finite(v) if v < 0 => Err(FieldError::NegativeValuation),
            Valuation::Finite(v) if v >= 1 => Ok(0),
            _ => match &self.repr {
                Repr::Q { p, r } => {
                    let pb = BigInt::from(*p);
                    let inv = mod_inverse(r.denom(), &pb);
                    let res = (r.numer() * inv).mod_floor(&pb);
                    Ok(u64::try_from(res).expect("residue fits"))
                }
                Repr::L { num, den } => {
                    let k = num.ord().unwrap();
                    debug_assert_eq!(den.ord().unwrap(), k);
                    let a = num.coeffs[k];
                    let b = den.coeffs[k];
                    Ok(a * inv_mod_p(b, num.p) % num.p)
                }
            },
        }
    }

    /// Canonical representative of self mod p^n (integral input required):
    /// an integer in [0, p^n) for Q_p, a polynomial of degree < n for F_p((t)).
    pub fn truncate(&self, n: u32) -> Result<Scalar, FieldError> {
        if self.valuation() < Valuation::Finite(0) {
            return Err(FieldError::NegativeValuation);
        }
        Ok(self.mod_uniformizer_pow(n as i64))
    }

    /// Canonical representative of self mod p^m o, with no integrality
    /// precondition. The result is in [0, p^m) with denominator a power of p
    /// (Q_p), or a Laurent polynomial with exponents < m (F_p((t))).
    pub fn mod_uniformizer_pow(&self, m: i64) -> Scalar {
        let v = match self.valuation() {
            Valuation::Infinity => return self.field().zero(),
            Valuation::Finite(v) => v,
        };
        if v >= m {
            return self.field().zero();
        }
        match &self.repr {
            Repr::Q { p, r } => {
                let s = bigint_val(r.denom(), *p) as i64;
                // reduced fraction: den = p^s * den' with p coprime to den'
                let pb = BigInt::from(*p);
                let den_unit = r.denom() / pb.pow(s as u32);
                let modulus = pb.pow((m + s) as u32);
                let inv = mod_inverse(&den_unit, &modulus);
                let k = (r.numer() * inv).mod_floor(&modulus);
                let r = BigRational::new(k, pb.pow(s as u32));
                Scalar { repr: Repr::Q { p: *p, r } }
            }
            Repr::L { num, den } => {
                let a = num.ord().unwrap();
                let b = den.ord().unwrap();
                let num_unit = {
                    let mut c = num.clone();
                    c.coeffs.drain(..a);
                    c
                };
                let den_unit = {
                    let mut c = den.clone();
                    c.coeffs.drain(..b);
                    c
                };
                let digits = (m - v) as usize;
                let series = num_unit.mul(&den_unit.inv_series(digits)).truncated(digits);
                // value = t^v * series, exponents v .. m-1
                if v >= 0 {
                    Scalar::from_laurent(series.shift(v as usize), FpPoly::one(num.p))
                } else {
                    let shift = FpPoly::from_terms(num.p, &[((-v) as usize, 1)]);
                    Scalar::from_laurent(series, shift)
                }
            }
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.repr {
            Repr::Q { p, r } => Scalar {
                repr: Repr::Q {
                    p: *p,
                    r: r.recip(),
                },
            },
            Repr::L { num, den } => Scalar::from_laurent(den.clone(), num.clone()),
        })
    }

    pub fn pow(&self, k: i64) -> Result<Scalar, FieldError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field().one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// For Q_p scalars of the form n / p^s, returns (n, s). None when the
    /// reduced denominator has a factor coprime to p, or for F_p((t)).
    pub fn qp_parts(&self) -> Option<(BigInt, u32)> {
        match &self.repr {
            Repr::Q { p, r } => {
                let s = bigint_val(r.denom(), *p);
                let pb = BigInt::from(*p);
                if r.denom() != &pb.pow(s as u32) {
                    return None;
                }
                Some((r.numer().clone(), s as u32))
            }
            Repr::L { .. } => None,
        }
    }

    fn mismatch(&self, rhs: &Scalar) -> ! {
        panic!(
            "scalar field mismatch: {:?}/{} vs {:?}/{}",
            self.field().backend(),
            self.field().p(),
            rhs.field().backend(),
            rhs.field().p()
        );
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (&self.repr, &rhs.repr) {
            (Repr::Q { p, r }, Repr::Q { p: p2, r: r2 }) if p == p2 => Scalar {
                repr: Repr::Q { p: *p, r: r + r2 },
            },
            (Repr::L { num, den }, Repr::L { num: n2, den: d2 }) if num.p == n2.p => {
                Scalar::from_laurent(num.mul(d2).add(&n2.mul(den)), den.mul(d2))
            }
            _ => self.mismatch(rhs),
        }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.repr, &rhs.repr) {
            (Repr::Q { p, r }, Repr::Q { p: p2, r: r2 }) if p == p2 => Scalar {
                repr: Repr::Q { p: *p, r: r * r2 },
            },
            (Repr::L { num, den }, Repr::L { num: n2, den: d2 }) if num.p == n2.p => {
                Scalar::from_laurent(num.mul(n2), den.mul(d2))
            }
            _ => self.mismatch(rhs),
        }
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.repr {
            Repr::Q { p, r } => Scalar {
                repr: Repr::Q { p: *p, r: -r },
            },
            Repr::L { num, den } => Scalar {
                repr: Repr::L {
                    num: num.neg(),
                    den: den.clone(),
                },
            },
        }
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.repr {
            Repr::Q { p, r } => {
                0u8.hash(state);
                p.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Repr::L { num, den } => {
                1u8.hash(state);
                num.p.hash(state);
                num.coeffs.hash(state);
                den.coeffs.hash(state);
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// Deterministic structural order (numeric for Q_p); used for canonical
    /// vertex and edge ordering, not for field semantics.
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Q { p, r }, Repr::Q { p: p2, r: r2 }) => p.cmp(p2).then_with(|| r.cmp(r2)),
            (Repr::L { num, den }, Repr::L { num: n2, den: d2 }) => num
                .p
                .cmp(&n2.p)
                .then_with(|| den.coeffs.len().cmp(&d2.coeffs.len()))
                .then_with(|| den.coeffs.cmp(&d2.coeffs))
                .then_with(|| num.coeffs.len().cmp(&n2.coeffs.len()))
                .then_with(|| num.coeffs.cmp(&n2.coeffs)),
            (Repr::Q { .. }, Repr::L { .. }) => Ordering::Less,
            (Repr::L { .. }, Repr::Q { .. }) => Ordering::Greater,
        }
    }
}

fn fmt_poly_terms(f: &mut fmt::Formatter<'_>, poly: &FpPoly, shift: i64) -> fmt::Result {
    let mut first = true;
    for (i, &c) in poly.coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        let e = i as i64 + shift;
        match (c, e) {
            (c, 0) => write!(f, "{c}")?,
            (1, 1) => write!(f, "t")?,
            (1, e) => write!(f, "t^{e}")?,
            (c, 1) => write!(f, "{c}*t")?,
            (c, e) => write!(f, "{c}*t^{e}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Q { r, .. } => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::L { num, den } => {
                // Denominator t^k folds into a Laurent polynomial.
                let is_monomial = den.is_monic() && den.ord() == den.deg();
                if is_monomial {
                    fmt_poly_terms(f, num, -(den.ord().unwrap() as i64))
                } else {
                    write!(f, "(")?;
                    fmt_poly_terms(f, num, 0)?;
                    write!(f, ")/(")?;
                    fmt_poly_terms(f, den, 0)?;
                    write!(f, ")")
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

impl Field {
    /// Parses the textual scalar syntax: "-45/7" for Q_p,
    /// "t^-2 + 1 + 2*t^3" (or "(num)/(den)") for F_p((t)).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim().replace('\u{2212}', "-");
        if s.is_empty() {
            return Err(FieldError::Parse("empty scalar".into()));
        }
        match self.backend() {
            Backend::Qp => self.parse_rational(&s),
            Backend::Laurent => self.parse_laurent(&s),
        }
    }

    fn parse_rational(&self, s: &str) -> Result<Scalar, FieldError> {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| FieldError::Parse(format!("bad integer: {num}")))?;
        let den: BigInt = match den {
            Some(d) => d
                .parse()
                .map_err(|_| FieldError::Parse(format!("bad integer: {d}")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(FieldError::Parse("zero denominator".into()));
        }
        Ok(Scalar {
            repr: Repr::Q {
                p: self.p(),
                r: BigRational::new(num, den),
            },
        })
    }

    fn parse_laurent(&self, s: &str) -> Result<Scalar, FieldError> {
        if let Some(body) = s.strip_prefix('(') {
            // (num)/(den)
            let close = body
                .find(')')
                .ok_or_else(|| FieldError::Parse("unclosed parenthesis".into()))?;
            let num = self.parse_laurent_sum(&body[..close])?;
            let rest = body[close + 1..].trim_start();
            let rest = rest
                .strip_prefix('/')
                .ok_or_else(|| FieldError::Parse("expected / after (num)".into()))?
                .trim_start();
            let rest = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| FieldError::Parse("expected (den)".into()))?;
            let den = self.parse_laurent_sum(rest)?;
            let den_scalar = den;
            if den_scalar.is_zero() {
                return Err(FieldError::Parse("zero denominator".into()));
            }
            return Ok(&num * &den_scalar.inv().expect("nonzero"));
        }
        self.parse_laurent_sum(s)
    }

    fn parse_laurent_sum(&self, s: &str) -> Result<Scalar, FieldError> {
        let mut acc = self.zero();
        let mut rest = s.trim();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        }
        loop {
            let term_end = rest
                .char_indices()
                .skip(1)
                .find(|&(i, ch)| {
                    (ch == '+' || ch == '-') && rest[..i].chars().rev().find(|c| !c.is_whitespace()) != Some('^')
                })
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let term = rest[..term_end].trim();
            let (coeff, exp) = self.parse_laurent_term(term)?;
            let signed = (sign * coeff as i64).rem_euclid(self.p() as i64) as u64;
            let t = &self.from_int(signed as i64) * &self.uniformizer_pow(exp);
            acc = &acc + &t;
            if term_end == rest.len() {
                break;
            }
            sign = if rest.as_bytes()[term_end] == b'+' { 1 } else { -1 };
            rest = rest[term_end + 1..].trim_start();
            if rest.is_empty() {
                return Err(FieldError::Parse("trailing operator".into()));
            }
        }
        Ok(acc)
    }

    fn parse_laurent_term(&self, term: &str) -> Result<(u64, i64), FieldError> {
        let bad = || FieldError::Parse(format!("bad term: {term}"));
        let term = term.trim();
        if term.is_empty() {
            return Err(bad());
        }
        if let Some(t_pos) = term.find('t') {
            let coeff_part = term[..t_pos].trim().trim_end_matches('*').trim();
            let coeff: u64 = if coeff_part.is_empty() {
                1
            } else {
                coeff_part.parse().map_err(|_| bad())?
            };
            let exp_part = term[t_pos + 1..].trim();
            let exp: i64 = if exp_part.is_empty() {
                1
            } else {
                exp_part
                    .strip_prefix('^')
                    .ok_or_else(bad)?
                    .trim()
                    .parse()
                    .map_err(|_| bad())?
            };
            Ok((coeff % self.p(), exp))
        } else {
            let coeff: u64 = term.parse().map_err(|_| bad())?;
            Ok((coeff % self.p(), 0))
        }
    }
}
