//! Invertible 2x2 matrices over the local field, the standard subgroups, and
//! the classical decompositions (Iwasawa, Cartan, Bruhat, Levi, Iwahori).
//!
//! All factorizations are exact: recomposing the factors reproduces the input
//! matrix with structural equality.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gl2Error {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not upper triangular (not in B)")]
    NotInB,
    #[error("matrix is not in the Iwahori subgroup")]
    NotInI,
    #[error("ordering must be a permutation of N', T, N")]
    BadOrdering,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Invertible 2x2 matrix with row-major entries a, b, c, d.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self, Gl2Error> {
        let f = a.field();
        assert!(
            b.field() == f && c.field() == f && d.field() == f,
            "matrix entries from different fields"
        );
        let m = Mat2 { a, b, c, d };
        if m.det().is_zero() {
            return Err(Gl2Error::Singular);
        }
        Ok(m)
    }

    pub fn identity(field: Field) -> Self {
        Mat2 {
            a: field.one(),
            b: field.zero(),
            c: field.zero(),
            d: field.one(),
        }
    }

    /// diag(x, y)
    pub fn diagonal(x: Scalar, y: Scalar) -> Result<Self, Gl2Error> {
        let f = x.field();
        Mat2::new(x, f.zero(), f.zero(), y)
    }

    /// The permutation matrix s = [[0,1],[1,0]].
    pub fn swap(field: Field) -> Self {
        Mat2 {
            a: field.zero(),
            b: field.one(),
            c: field.one(),
            d: field.zero(),
        }
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }
    pub fn b(&self) -> &Scalar {
        &self.b
    }
    pub fn c(&self) -> &Scalar {
        &self.c
    }
    pub fn d(&self) -> &Scalar {
        &self.d
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> Scalar {
        &self.a + &self.d
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }

    /// Exact inverse; total because Mat2 is invertible by construction.
    pub fn inv(&self) -> Mat2 {
        let det_inv = self.det().inv().expect("Mat2 invariant: det != 0");
        Mat2 {
            a: &self.d * &det_inv,
            b: &(-&self.b) * &det_inv,
            c: &(-&self.c) * &det_inv,
            d: &self.a * &det_inv,
        }
    }

    pub fn scale(&self, z: &Scalar) -> Result<Mat2, Gl2Error> {
        if z.is_zero() {
            return Err(Gl2Error::Singular);
        }
        Ok(Mat2 {
            a: z * &self.a,
            b: z * &self.b,
            c: z * &self.c,
            d: z * &self.d,
        })
    }

    pub fn pow(&self, k: i64) -> Mat2 {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Mat2::identity(self.field());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Minimum valuation over the four entries.
    pub fn min_valuation(&self) -> Valuation {
        self.entries()
            .iter()
            .map(|e| e.valuation())
            .min()
            .expect("four entries")
    }

    /// Column-action on a vector: M * (x, y)^T.
    pub fn apply(&self, x: &Scalar, y: &Scalar) -> (Scalar, Scalar) {
        (
            &(&self.a * x) + &(&self.b * y),
            &(&self.c * x) + &(&self.d * y),
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

impl Field {
    /// Parses the matrix syntax "a,b;c,d" with scalar entry syntax.
    pub fn parse_mat2(&self, s: &str) -> Result<Mat2, Gl2Error> {
        let rows: Vec<&str> = s.trim().split(';').collect();
        if rows.len() != 2 {
            return Err(Gl2Error::Parse(format!("expected two rows in {s:?}")));
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(Gl2Error::Parse(format!("expected two entries in row {row:?}")));
            }
            for col in cols {
                entries.push(self.parse_scalar(col)?);
            }
        }
        let d = entries.pop().unwrap();
        let c = entries.pop().unwrap();
        let b = entries.pop().unwrap();
        let a = entries.pop().unwrap();
        Mat2::new(a, b, c, d)
    }
}

// ---------------------------------------------------------------------------
// Subgroup membership
// ---------------------------------------------------------------------------

/// The standard subgroups of GL2(F).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupTag {
    /// Upper triangular (Borel).
    B,
    /// Upper unipotent.
    N,
    /// Lower unipotent.
    NPrime,
    /// Diagonal torus.
    T,
    /// Center (scalar matrices).
    Z,
    /// GL2(o): integral entries with unit determinant.
    K,
    /// Iwahori: integral, unit diagonal, lower-left in the maximal ideal.
    I,
}

/// Entry-condition membership test for the subgroups of `SubgroupTag`.
pub fn member(g: &Mat2, tag: SubgroupTag) -> bool {
    let unit = |x: &Scalar| x.valuation() == Valuation::Finite(0);
    match tag {
        SubgroupTag::B => g.c.is_zero(),
        SubgroupTag::N => g.c.is_zero() && g.a.is_one() && g.d.is_one(),
        SubgroupTag::NPrime => g.b.is_zero() && g.a.is_one() && g.d.is_one(),
        SubgroupTag::T => g.b.is_zero() && g.c.is_zero(),
        SubgroupTag::Z => g.b.is_zero() && g.c.is_zero() && g.a == g.d,
        SubgroupTag::K => g.entries().iter().all(|e| e.is_integral()) && unit(&g.det()),
        SubgroupTag::I => {
            g.entries().iter().all(|e| e.is_integral())
                && unit(&g.a)
                && unit(&g.d)
                && g.c.valuation() >= Valuation::Finite(1)
        }
    }
}

// ---------------------------------------------------------------------------
// Decompositions
// ---------------------------------------------------------------------------

/// Iwasawa decomposition g = b * k with b upper triangular and k in K.
///
/// Pivot rule: compare the valuations of the bottom row (c, d) and eliminate
/// with the entry of smaller valuation, ties broken toward d.
pub fn iwasawa(g: &Mat2) -> (Mat2, Mat2) {
    let f = g.field();
    if g.c.is_zero() {
        return (g.clone(), Mat2::identity(f));
    }
    if g.d.valuation() <= g.c.valuation() {
        // pivot d: k = [[1,0],[c/d,1]]
        let q = &g.c * &g.d.inv().expect("d != 0 when v(d) <= v(c) finite");
        let k = Mat2::new(f.one(), f.zero(), q.clone(), f.one()).expect("unipotent");
        let b = g.mul(&Mat2::new(f.one(), f.zero(), -&q, f.one()).expect("unipotent"));
        (b, k)
    } else {
        // pivot c: k = [[0,1],[1,d/c]]
        let q = &g.d * &g.c.inv().expect("c nonzero");
        let k = Mat2::new(f.zero(), f.one(), f.one(), q.clone()).expect("unit det");
        let k1 = Mat2::new(-&q, f.one(), f.one(), f.zero()).expect("unit det");
        let b = g.mul(&k1);
        (b, k)
    }
}

/// Cartan normal form g = k1 * diag(pi^a, pi^b) * k2 with a <= b.
#[derive(Debug, Clone)]
pub struct CartanForm {
    pub k1: Mat2,
    pub exponents: (i64, i64),
    pub k2: Mat2,
}

impl CartanForm {
    pub fn diagonal_part(&self, field: Field) -> Mat2 {
        Mat2::diagonal(
            field.uniformizer_pow(self.exponents.0),
            field.uniformizer_pow(self.exponents.1),
        )
        .expect("powers of the uniformizer")
    }

    pub fn recompose(&self) -> Mat2 {
        let f = self.k1.field();
        self.k1.mul(&self.diagonal_part(f)).mul(&self.k2)
    }
}

/// Elementary divisor exponents of g as a double coset invariant for K\G/K:
/// a = minimum entry valuation, a + b = v(det g).
pub fn elementary_divisors(g: &Mat2) -> (i64, i64) {
    let a = g.min_valuation().finite().expect("nonzero matrix");
    let det_v = g.det().valuation().finite().expect("invertible matrix");
    (a, det_v - a)
}

/// Smith-normal-form pass over the valuation ring with recorded unimodular
/// row/column operations.
pub fn cartan(g: &Mat2) -> CartanForm {
    let f = g.field();
    let mut m = g.clone();
    let mut k1 = Mat2::identity(f);
    let mut k2 = Mat2::identity(f);

    // invariant: g == k1 * m * k2

    // Move a minimum-valuation entry to position (1,1), reading order ties.
    let vals: Vec<Valuation> = m.entries().iter().map(|e| e.valuation()).collect();
    let min_v = *vals.iter().min().unwrap();
    let pos = vals.iter().position(|&v| v == min_v).unwrap();
    let s = Mat2::swap(f);
    if pos >= 2 {
        // swap rows: m = s * m', so m' = s * m and k1 absorbs s
        m = s.mul(&m);
        k1 = k1.mul(&s);
    }
    if pos % 2 == 1 {
        m = m.mul(&s);
        k2 = s.mul(&k2);
    }

    // Clear the rest of the first column and row with integral transvections.
    if !m.c.is_zero() {
        let q = &m.c * &m.a.inv().expect("pivot nonzero");
        let e = Mat2::new(f.one(), f.zero(), -&q, f.one()).expect("unipotent");
        let e_inv = Mat2::new(f.one(), f.zero(), q, f.one()).expect("unipotent");
        m = e.mul(&m);
        k1 = k1.mul(&e_inv);
    }
    if !m.b.is_zero() {
        let q = &m.b * &m.a.inv().expect("pivot nonzero");
        let e = Mat2::new(f.one(), -&q, f.zero(), f.one()).expect("unipotent");
        let e_inv = Mat2::new(f.one(), q, f.zero(), f.one()).expect("unipotent");
        m = m.mul(&e);
        k2 = e_inv.mul(&k2);
    }

    // m is diag(u1 pi^a, u2 pi^b); pull the units into k1.
    let a = m.a.valuation().finite().expect("pivot nonzero");
    let b = m.d.valuation().finite().expect("diagonal nonzero");
    let u1 = &m.a * &f.uniformizer_pow(-a);
    let u2 = &m.d * &f.uniformizer_pow(-b);
    let u = Mat2::diagonal(u1, u2).expect("units");
    k1 = k1.mul(&u);

    debug_assert!(a <= b);
    CartanForm {
        k1,
        exponents: (a, b),
        k2,
    }
}

/// Bruhat decomposition: either g in B, or g = b1 * s * b2.
#[derive(Debug, Clone)]
pub enum BruhatForm {
    CaseB(Mat2),
    CaseBsB { b1: Mat2, b2: Mat2 },
}

impl BruhatForm {
    pub fn recompose(&self) -> Mat2 {
        match self {
            BruhatForm::CaseB(b) => b.clone(),
            BruhatForm::CaseBsB { b1, b2 } => {
                let s = Mat2::swap(b1.field());
                b1.mul(&s).mul(b2)
            }
        }
    }
}

pub fn bruhat(g: &Mat2) -> BruhatForm {
    let f = g.field();
    if g.c.is_zero() {
        return BruhatForm::CaseB(g.clone());
    }
    let c_inv = g.c.inv().expect("c nonzero");
    let b1 = Mat2::new(f.one(), &g.a * &c_inv, f.zero(), f.one()).expect("unipotent");
    let z2 = &(-&g.det()) * &c_inv;
    let b2 = Mat2::new(g.c.clone(), g.d.clone(), f.zero(), z2).expect("nonzero diagonal");
    BruhatForm::CaseBsB { b1, b2 }
}

/// Levi decomposition of an upper triangular matrix: b = n * t, unique.
pub fn levi(b: &Mat2) -> Result<(Mat2, Mat2), Gl2Error> {
    if !member(b, SubgroupTag::B) {
        return Err(Gl2Error::NotInB);
    }
    let f = b.field();
    let x = &b.b * &b.d.inv().expect("d != 0 for invertible triangular");
    let n = Mat2::new(f.one(), x, f.zero(), f.one()).expect("unipotent");
    let t = Mat2::diagonal(b.a.clone(), b.d.clone()).expect("invertible diagonal");
    Ok((n, t))
}

/// Slot labels for the Iwahori triple factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IwahoriSlot {
    NPrime,
    T,
    N,
}

/// Unique factorization i = f1 * f2 * f3 along the requested ordering of
/// I∩N', I∩T, I∩N.
pub fn iwahori_factor(
    i: &Mat2,
    ordering: [IwahoriSlot; 3],
) -> Result<(Mat2, Mat2, Mat2), Gl2Error> {
    use IwahoriSlot::*;
    if !member(i, SubgroupTag::I) {
        return Err(Gl2Error::NotInI);
    }
    {
        let mut seen = [false; 3];
        for s in ordering {
            let idx = match s {
                NPrime => 0,
                T => 1,
                N => 2,
            };
            if seen[idx] {
                return Err(Gl2Error::BadOrdering);
            }
            seen[idx] = true;
        }
    }
    let f = i.field();
    let det = i.det();
    let a_inv = i.a.inv().expect("a unit");
    let d_inv = i.d.inv().expect("d unit");
    let det_inv = det.inv().expect("det unit");
    // solved per ordering: x parametrizes N, y parametrizes N', (u,v) the torus
    let (x, y, u, v) = match ordering {
        [NPrime, T, N] => (
            &i.b * &a_inv,
            &i.c * &a_inv,
            i.a.clone(),
            &det * &a_inv,
        ),
        [NPrime, N, T] => (
            &(&i.a * &i.b) * &det_inv,
            &i.c * &a_inv,
            i.a.clone(),
            &det * &a_inv,
        ),
        [T, NPrime, N] => (
            &i.b * &a_inv,
            &(&i.a * &i.c) * &det_inv,
            i.a.clone(),
            &det * &a_inv,
        ),
        [T, N, NPrime] => (
            &(&i.b * &i.d) * &det_inv,
            &i.c * &d_inv,
            &det * &d_inv,
            i.d.clone(),
        ),
        [N, T, NPrime] => (
            &i.b * &d_inv,
            &i.c * &d_inv,
            &det * &d_inv,
            i.d.clone(),
        ),
        [N, NPrime, T] => (
            &i.b * &d_inv,
            &(&i.c * &i.d) * &det_inv,
            &det * &d_inv,
            i.d.clone(),
        ),
        _ => unreachable!("validated permutation"),
    };
    let fac = |slot: IwahoriSlot| -> Mat2 {
        match slot {
            NPrime => Mat2::new(f.one(), f.zero(), y.clone(), f.one()).expect("unipotent"),
            T => Mat2::diagonal(u.clone(), v.clone()).expect("unit diagonal"),
            N => Mat2::new(f.one(), x.clone(), f.zero(), f.one()).expect("unipotent"),
        }
    };
    let (f1, f2, f3) = (fac(ordering[0]), fac(ordering[1]), fac(ordering[2]));
    debug_assert_eq!(f1.mul(&f2).mul(&f3), *i);
    Ok((f1, f2, f3))
}

// ---------------------------------------------------------------------------
// Projective (PGL2) representatives
// ---------------------------------------------------------------------------

/// Canonical representative of a class in PGL2(F): the minimum entry
/// valuation is 0 and the first unit entry in reading order equals 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjMat {
    rep: Mat2,
}

impl ProjMat {
    pub fn rep(&self) -> &Mat2 {
        &self.rep
    }
}

impl fmt::Display for ProjMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

pub fn proj_normalize(g: &Mat2) -> ProjMat {
    let f = g.field();
    let min_v = g.min_valuation().finite().expect("invertible matrix");
    let scaled = g
        .scale(&f.uniformizer_pow(-min_v))
        .expect("uniformizer power is nonzero");
    let unit = scaled
        .entries()
        .iter()
        .find(|e| e.valuation() == Valuation::Finite(0))
        .expect("an entry of valuation zero exists")
        .inv()
        .expect("unit entry");
    let rep = scaled.scale(&unit).expect("unit scaling");
    ProjMat { rep }
}

/// Equality in PGL2: g and h differ by a central scalar.
pub fn proj_eq(g: &Mat2, h: &Mat2) -> bool {
    proj_normalize(g) == proj_normalize(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> Field {
        Field::qp(5).unwrap()
    }

    #[test]
    fn membership_examples() {
        let f = q5();
        let id = Mat2::identity(f);
        for tag in [
            SubgroupTag::B,
            SubgroupTag::N,
            SubgroupTag::NPrime,
            SubgroupTag::T,
            SubgroupTag::Z,
            SubgroupTag::K,
            SubgroupTag::I,
        ] {
            assert!(member(&id, tag), "identity in {tag:?}");
        }
        let p = f.uniformizer();
        let lower_p = Mat2::new(f.one(), f.zero(), p.clone(), f.one()).unwrap();
        let lower_1 = Mat2::new(f.one(), f.zero(), f.one(), f.one()).unwrap();
        assert!(member(&lower_p, SubgroupTag::I));
        assert!(!member(&lower_1, SubgroupTag::I));
        let diag_p = Mat2::diagonal(p, f.one()).unwrap();
        assert!(!member(&diag_p, SubgroupTag::K));
    }

    #[test]
    fn iwasawa_examples() {
        let f = q5();
        let id = Mat2::identity(f);
        let (b, k) = iwasawa(&id);
        assert_eq!(b, id);
        assert_eq!(k, id);

        let g = f.parse_mat2("1,0;1/5,1").unwrap();
        let (b, k) = iwasawa(&g);
        assert!(member(&b, SubgroupTag::B));
        assert!(member(&k, SubgroupTag::K));
        assert_eq!(b.mul(&k), g);
    }

    #[test]
    fn cartan_examples() {
        let f = q5();
        let p2 = f.uniformizer_pow(2);
        let g = Mat2::diagonal(f.one(), p2).unwrap();
        let c = cartan(&g);
        assert_eq!(c.exponents, (0, 2));
        assert_eq!(c.k1, Mat2::identity(f));
        assert_eq!(c.k2, Mat2::identity(f));
        assert_eq!(c.recompose(), g);

        let g = f.parse_mat2("0,1;5,0").unwrap();
        let c = cartan(&g);
        assert_eq!(c.exponents, (0, 1));
        assert!(member(&c.k1, SubgroupTag::K));
        assert!(member(&c.k2, SubgroupTag::K));
        assert_eq!(c.recompose(), g);
    }

    #[test]
    fn elementary_divisor_examples() {
        let f = q5();
        assert_eq!(elementary_divisors(&Mat2::identity(f)), (0, 0));
        let g = Mat2::diagonal(f.uniformizer_pow(-1), f.uniformizer_pow(3)).unwrap();
        assert_eq!(elementary_divisors(&g), (-1, 3));
        // [[p, 1],[p^2, p^3]]: min valuation 0, det = p^4 - p^2 has valuation 2
        let g = f.parse_mat2("5,1;25,125").unwrap();
        assert_eq!(elementary_divisors(&g), (0, 2));
        let c = cartan(&g);
        assert_eq!(c.exponents, (0, 2));
        assert_eq!(c.recompose(), g);
    }

    #[test]
    fn bruhat_examples() {
        let f = q5();
        let upper = f.parse_mat2("2,3;0,1").unwrap();
        match bruhat(&upper) {
            BruhatForm::CaseB(b) => assert_eq!(b, upper),
            _ => panic!("upper triangular must be case B"),
        }
        let s = Mat2::swap(f);
        match bruhat(&s) {
            BruhatForm::CaseBsB { b1, b2 } => {
                assert_eq!(b1, Mat2::identity(f));
                assert_eq!(b2, Mat2::identity(f));
            }
            _ => panic!("s is in BsB"),
        }
        let g = f.parse_mat2("0,1;1,1").unwrap();
        let form = bruhat(&g);
        match &form {
            BruhatForm::CaseBsB { b1, b2 } => {
                assert!(member(b1, SubgroupTag::B));
                assert!(member(b2, SubgroupTag::B));
            }
            _ => panic!("c != 0 must be case BsB"),
        }
        assert_eq!(form.recompose(), g);
    }

    #[test]
    fn levi_examples() {
        let f = q5();
        let t = f.parse_mat2("3,0;0,7").unwrap();
        let (n, tt) = levi(&t).unwrap();
        assert_eq!(n, Mat2::identity(f));
        assert_eq!(tt, t);

        let u = f.parse_mat2("1,9;0,1").unwrap();
        let (n, tt) = levi(&u).unwrap();
        assert_eq!(n, u);
        assert_eq!(tt, Mat2::identity(f));

        let b = f.parse_mat2("2,3;0,10").unwrap();
        let (n, tt) = levi(&b).unwrap();
        assert!(member(&n, SubgroupTag::N));
        assert!(member(&tt, SubgroupTag::T));
        assert_eq!(n.mul(&tt), b);

        let g = f.parse_mat2("1,0;5,1").unwrap();
        assert_eq!(levi(&g), Err(Gl2Error::NotInB));
    }

    #[test]
    fn iwahori_factor_examples() {
        use IwahoriSlot::*;
        let f = q5();
        let id = Mat2::identity(f);
        let (f1, f2, f3) = iwahori_factor(&id, [NPrime, T, N]).unwrap();
        assert_eq!(f1, id);
        assert_eq!(f2, id);
        assert_eq!(f3, id);

        let t = f.parse_mat2("2,0;0,3").unwrap();
        let (f1, f2, f3) = iwahori_factor(&t, [NPrime, T, N]).unwrap();
        assert_eq!(f1, id);
        assert_eq!(f2, t);
        assert_eq!(f3, id);

        // [[1, 1],[p, 1+p]]
        let i = f.parse_mat2("1,1;5,6").unwrap();
        for ordering in [
            [NPrime, T, N],
            [NPrime, N, T],
            [T, NPrime, N],
            [T, N, NPrime],
            [N, T, NPrime],
            [N, NPrime, T],
        ] {
            let (f1, f2, f3) = iwahori_factor(&i, ordering).unwrap();
            assert_eq!(f1.mul(&f2).mul(&f3), i, "ordering {ordering:?}");
            for (fac, slot) in [(&f1, ordering[0]), (&f2, ordering[1]), (&f3, ordering[2])] {
                let tag = match slot {
                    NPrime => SubgroupTag::NPrime,
                    T => SubgroupTag::T,
                    N => SubgroupTag::N,
                };
                assert!(member(fac, tag), "{slot:?} factor in its subgroup");
                assert!(member(fac, SubgroupTag::I), "{slot:?} factor in I");
            }
        }
        assert!(iwahori_factor(&i, [N, N, T]).is_err());
        let not_i = f.parse_mat2("1,0;1,1").unwrap();
        assert_eq!(iwahori_factor(&not_i, [NPrime, T, N]), Err(Gl2Error::NotInI));
    }

    #[test]
    fn levi_and_iwahori_factorizations_are_unique() {
        use IwahoriSlot::*;
        let f = q5();
        // factor, recompose, factor again: identical factors both times
        let b = f.parse_mat2("10,7/5;0,-2").unwrap();
        let (n, t) = levi(&b).unwrap();
        let (n2, t2) = levi(&n.mul(&t)).unwrap();
        assert_eq!((n, t), (n2, t2));

        let i = f.parse_mat2("2,3;10,1").unwrap();
        for ordering in [[NPrime, T, N], [N, T, NPrime], [T, NPrime, N]] {
            let (f1, f2, f3) = iwahori_factor(&i, ordering).unwrap();
            let again = iwahori_factor(&f1.mul(&f2).mul(&f3), ordering).unwrap();
            assert_eq!((f1, f2, f3), again, "ordering {ordering:?}");
        }
    }

    #[test]
    fn projective_normalization() {
        let f = q5();
        let g = f.parse_mat2("0,1;1,1").unwrap();
        let pg = g.scale(&f.uniformizer_pow(3)).unwrap();
        assert!(proj_eq(&g, &pg));
        assert!(!proj_eq(&Mat2::identity(f), &Mat2::swap(f)));

        let d1 = Mat2::diagonal(f.uniformizer_pow(1), f.uniformizer_pow(3)).unwrap();
        let d2 = Mat2::diagonal(f.one(), f.uniformizer_pow(2)).unwrap();
        assert_eq!(proj_normalize(&d1), proj_normalize(&d2));
        // idempotent
        let n = proj_normalize(&g);
        assert_eq!(proj_normalize(n.rep()), n);
    }

    #[test]
    fn matrix_parse_roundtrip() {
        let f = q5();
        let g = f.parse_mat2("1,-3/5;25,7").unwrap();
        assert_eq!(f.parse_mat2(&g.to_string()).unwrap(), g);
        assert!(f.parse_mat2("1,0;0,0").is_err());
        assert!(f.parse_mat2("1,0;0").is_err());

        let l = Field::laurent(3).unwrap();
        let g = l.parse_mat2("t^-2 + 1,0;2*t,1 + 2*t^3").unwrap();
        assert_eq!(l.parse_mat2(&g.to_string()).unwrap(), g);
    }
}
