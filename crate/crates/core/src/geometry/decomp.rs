//! Geometric analogues of the classical decompositions, realized on PGL2
//! elements. Factors are plain matrices; the subgroup each factor must
//! inhabit is defined geometrically (by its action on the tree) and checked
//! through `geo_member`.

use crate::field::{Field, Valuation};
use crate::gl2::{proj_eq, proj_normalize, Mat2};
use crate::tree::{act, base_vertex, distance, sphere, standard_vertex, End, Vertex};

use super::classify::fixes_standard_apartment;
use super::witness::vertex_to_standard;
use super::GeoError;

/// Geometric subgroups of the automorphism group, realized on PGL2 elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeoGroup {
    /// Stabilizer of the base vertex x_0.
    StabilizerX0,
    /// Stabilizer of the end omega = [1:0].
    EndStabilizer,
    /// Stabilizer of the opposite end omega' = [0:1].
    OppositeEndStabilizer,
    /// End stabilizers that fix some vertex of the standard apartment.
    EllipticEndStabilizer,
    /// Pointwise stabilizer of the edge {x_0, x_1}.
    EdgePointwiseStabilizer,
    /// Integer powers of the translation tau = diag(1, pi).
    TranslationPower,
    /// Pointwise stabilizer of the whole standard apartment.
    ApartmentPointwiseStabilizer,
}

/// Geometric membership test (all conditions are central-scaling invariant).
pub fn geo_member(g: &Mat2, group: GeoGroup) -> bool {
    let f = g.field();
    let x0 = base_vertex(f);
    let x1 = standard_vertex(f, 1);
    match group {
        GeoGroup::StabilizerX0 => act(g, &x0) == x0,
        GeoGroup::EndStabilizer => crate::tree::stabilizes_end(g, &End::omega(f)),
        GeoGroup::OppositeEndStabilizer => crate::tree::stabilizes_end(g, &End::omega_prime(f)),
        GeoGroup::EllipticEndStabilizer => {
            // stabilizes omega (hence literally upper triangular) and induces
            // zero translation along the apartment, so it fixes some x_i
            g.c().is_zero() && g.a().valuation() == g.d().valuation()
        }
        GeoGroup::EdgePointwiseStabilizer => act(g, &x0) == x0 && act(g, &x1) == x1,
        GeoGroup::TranslationPower => {
            let v = act(g, &x0);
            let f = g.field();
            v.c().is_zero() && {
                let tau = Mat2::diagonal(f.one(), f.uniformizer_pow(v.m())).expect("invertible");
                proj_eq(g, &tau)
            }
        }
        GeoGroup::ApartmentPointwiseStabilizer => fixes_standard_apartment(g, 4),
    }
}

/// An index i with g(x_i) = x_i, for g in the elliptic end stabilizer.
pub fn elliptic_fixed_index(g: &Mat2) -> Option<i64> {
    if !geo_member(g, GeoGroup::EllipticEndStabilizer) {
        return None;
    }
    let va = g.a().valuation().finite().expect("unit-ratio diagonal");
    match g.b().valuation() {
        Valuation::Infinity => Some(0),
        Valuation::Finite(vb) => Some(va - vb),
    }
}

/// One of the geometric decompositions, with enough structure to recompose
/// and to check every factor's membership.
#[derive(Debug, Clone)]
pub enum GeoDecomposition {
    /// g = k * b with k fixing x_0 and b stabilizing omega.
    Iwasawa { k: Mat2, b: Mat2 },
    /// g = k1 * tau^power * k2 with k1, k2 fixing x_0 and power >= 0.
    Cartan { k1: Mat2, power: i64, k2: Mat2 },
    /// g stabilizes omega.
    BruhatEnd { b: Mat2 },
    /// g = n * alpha * b with n in the elliptic end stabilizer.
    BruhatReflected { n_part: Mat2, b: Mat2 },
    /// b = tau^power * n_part.
    Levi { power: i64, n_part: Mat2 },
    /// i = in_b * in_bprime, both fixing the edge pointwise.
    Iwahori { in_b: Mat2, in_bprime: Mat2 },
    /// k fixes the edge {x_0, x_1} pointwise.
    KCosetEdge { i: Mat2 },
    /// k = i1 * alpha * i2.
    KCosetReflected { i1: Mat2, i2: Mat2 },
}

impl GeoDecomposition {
    pub fn kind(&self) -> &'static str {
        match self {
            GeoDecomposition::Iwasawa { .. } => "iwasawa",
            GeoDecomposition::Cartan { .. } => "cartan",
            GeoDecomposition::BruhatEnd { .. } => "bruhat-end",
            GeoDecomposition::BruhatReflected { .. } => "bruhat-reflected",
            GeoDecomposition::Levi { .. } => "levi",
            GeoDecomposition::Iwahori { .. } => "iwahori",
            GeoDecomposition::KCosetEdge { .. } => "k-coset-edge",
            GeoDecomposition::KCosetReflected { .. } => "k-coset-reflected",
        }
    }

    /// The factors paired with the geometric subgroup each must inhabit.
    /// Distinguished elements (alpha, tau powers) carry their defining tag.
    pub fn factors(&self) -> Vec<(&'static str, Mat2, Option<GeoGroup>)> {
        let f = self.field();
        let tau_pow = |n: i64| {
            Mat2::diagonal(f.one(), f.uniformizer_pow(n)).expect("invertible")
        };
        match self {
            GeoDecomposition::Iwasawa { k, b } => vec![
                ("k", k.clone(), Some(GeoGroup::StabilizerX0)),
                ("b", b.clone(), Some(GeoGroup::EndStabilizer)),
            ],
            GeoDecomposition::Cartan { k1, power, k2 } => vec![
                ("k1", k1.clone(), Some(GeoGroup::StabilizerX0)),
                ("tau^n", tau_pow(*power), Some(GeoGroup::TranslationPower)),
                ("k2", k2.clone(), Some(GeoGroup::StabilizerX0)),
            ],
            GeoDecomposition::BruhatEnd { b } => {
                vec![("b", b.clone(), Some(GeoGroup::EndStabilizer))]
            }
            GeoDecomposition::BruhatReflected { n_part, b } => vec![
                ("n", n_part.clone(), Some(GeoGroup::EllipticEndStabilizer)),
                ("alpha", Mat2::swap(f), None),
                ("b", b.clone(), Some(GeoGroup::EndStabilizer)),
            ],
            GeoDecomposition::Levi { power, n_part } => vec![
                ("tau^n", tau_pow(*power), Some(GeoGroup::TranslationPower)),
                ("n", n_part.clone(), Some(GeoGroup::EllipticEndStabilizer)),
            ],
            GeoDecomposition::Iwahori { in_b, in_bprime } => vec![
                ("i-b", in_b.clone(), Some(GeoGroup::EdgePointwiseStabilizer)),
                (
                    "i-bprime",
                    in_bprime.clone(),
                    Some(GeoGroup::EdgePointwiseStabilizer),
                ),
            ],
            GeoDecomposition::KCosetEdge { i } => {
                vec![("i", i.clone(), Some(GeoGroup::EdgePointwiseStabilizer))]
            }
            GeoDecomposition::KCosetReflected { i1, i2 } => vec![
                ("i1", i1.clone(), Some(GeoGroup::EdgePointwiseStabilizer)),
                ("alpha", Mat2::swap(f), None),
                ("i2", i2.clone(), Some(GeoGroup::EdgePointwiseStabilizer)),
            ],
        }
    }

    fn field(&self) -> Field {
        match self {
            GeoDecomposition::Iwasawa { k, .. } => k.field(),
            GeoDecomposition::Cartan { k1, .. } => k1.field(),
            GeoDecomposition::BruhatEnd { b } => b.field(),
            GeoDecomposition::BruhatReflected { n_part, .. } => n_part.field(),
            GeoDecomposition::Levi { n_part, .. } => n_part.field(),
            GeoDecomposition::Iwahori { in_b, .. } => in_b.field(),
            GeoDecomposition::KCosetEdge { i } => i.field(),
            GeoDecomposition::KCosetReflected { i1, .. } => i1.field(),
        }
    }

    pub fn recompose(&self) -> Mat2 {
        let mut acc = Mat2::identity(self.field());
        for (_, m, _) in self.factors() {
            acc = acc.mul(&m);
        }
        acc
    }

    /// Projective recomposition check plus all factor memberships. The
    /// Iwahori factors additionally stabilize their respective ends.
    pub fn verify(&self, input: &Mat2) -> bool {
        if !proj_eq(&self.recompose(), input) {
            return false;
        }
        let extra = match self {
            GeoDecomposition::Iwahori { in_b, in_bprime } => {
                geo_member(in_b, GeoGroup::EndStabilizer)
                    && geo_member(in_bprime, GeoGroup::OppositeEndStabilizer)
            }
            _ => true,
        };
        extra
            && self
                .factors()
                .iter()
                .all(|(_, m, grp)| grp.map(|gr| geo_member(m, gr)).unwrap_or(true))
    }
}

/// g = k * b with k fixing x_0 (built as a unimodular frame moving omega to
/// g(omega)) and b stabilizing omega.
pub fn iwasawa_geo(g: &Mat2) -> GeoDecomposition {
    let f = g.field();
    let sigma = End::omega(f).apply(g);
    let (u, v) = sigma.coords();
    // primitive representative of the line
    let shift = -u.valuation().min(v.valuation()).finite().expect("nonzero line");
    let pi_s = f.uniformizer_pow(shift);
    let (u, v) = (&pi_s * &u, &pi_s * &v);
    let k = if u.valuation() == Valuation::Finite(0) {
        Mat2::new(u, f.zero(), v, f.one())
    } else {
        Mat2::new(u, f.one(), v, f.zero())
    }
    .expect("unit determinant completion");
    let b = k.inv().mul(g);
    GeoDecomposition::Iwasawa { k, b }
}

/// g = k1 * tau^n * k2 with n = d(x_0, g(x_0)).
pub fn cartan_geo(g: &Mat2) -> Result<GeoDecomposition, GeoError> {
    let f = g.field();
    let image = act(g, &base_vertex(f));
    let n = distance(&base_vertex(f), &image) as i64;
    let k = vertex_to_standard(&image)?;
    let tau_neg = Mat2::diagonal(f.one(), f.uniformizer_pow(-n)).expect("invertible");
    let k2 = tau_neg.mul(&k).mul(g);
    Ok(GeoDecomposition::Cartan {
        k1: k.inv(),
        power: n,
        k2,
    })
}

/// Either g stabilizes omega, or g = n * alpha * b with the n-part unique
/// modulo the apartment stabilizer.
pub fn bruhat_geo(g: &Mat2) -> GeoDecomposition {
    let f = g.field();
    let omega = End::omega(f);
    let sigma = omega.apply(g);
    if sigma == omega {
        return GeoDecomposition::BruhatEnd { b: g.clone() };
    }
    // sigma = [w:1]; the upper unipotent with slope w maps omega' to sigma
    let (u, v) = sigma.coords();
    let w = &u * &v.inv().expect("sigma differs from omega");
    let n_part = Mat2::new(f.one(), w, f.zero(), f.one()).expect("unipotent");
    let alpha = Mat2::swap(f);
    let b = alpha.mul(&n_part.inv()).mul(g);
    GeoDecomposition::BruhatReflected { n_part, b }
}

/// b = tau^n * h where n is the signed translation along the apartment and h
/// fixes an apartment vertex.
pub fn levi_geo(b: &Mat2) -> Result<GeoDecomposition, GeoError> {
    if !geo_member(b, GeoGroup::EndStabilizer) {
        return Err(GeoError::NotInSubgroup("end stabilizer"));
    }
    let va = b.a().valuation().finite().expect("invertible triangular");
    let vd = b.d().valuation().finite().expect("invertible triangular");
    let n = vd - va;
    let f = b.field();
    let tau_neg = Mat2::diagonal(f.one(), f.uniformizer_pow(-n)).expect("invertible");
    Ok(GeoDecomposition::Levi {
        power: n,
        n_part: tau_neg.mul(b),
    })
}

/// i = (factor stabilizing omega) * (factor stabilizing omega'), both fixing
/// the edge {x_0, x_1} pointwise.
pub fn iwahori_geo(i: &Mat2) -> Result<GeoDecomposition, GeoError> {
    if !geo_member(i, GeoGroup::EdgePointwiseStabilizer) {
        return Err(GeoError::NotInSubgroup("edge pointwise stabilizer"));
    }
    // the canonical projective representative is an Iwahori matrix
    let i0 = proj_normalize(i).rep().clone();
    let f = i.field();
    let d_inv = i0.d().inv().expect("unit corner");
    let in_b = Mat2::new(
        &i0.det() * &d_inv,
        i0.b() * &d_inv,
        f.zero(),
        f.one(),
    )
    .expect("invertible");
    let in_bprime = Mat2::new(f.one(), f.zero(), i0.c().clone(), i0.d().clone())
        .expect("invertible");
    Ok(GeoDecomposition::Iwahori { in_b, in_bprime })
}

/// For k fixing x_0: either k fixes x_1 too, or k = i1 * alpha * i2.
pub fn k_double_coset(k: &Mat2) -> Result<GeoDecomposition, GeoError> {
    let f = k.field();
    if !geo_member(k, GeoGroup::StabilizerX0) {
        return Err(GeoError::NotInSubgroup("stabilizer of the base vertex"));
    }
    let x1 = standard_vertex(f, 1);
    let v = act(k, &x1);
    if v == x1 {
        return Ok(GeoDecomposition::KCosetEdge { i: k.clone() });
    }
    // i1 fixes x_0 and x_1 and maps x_{-1} to v
    let i1 = if v == standard_vertex(f, -1) {
        Mat2::identity(f)
    } else {
        // v = (1, r) with nonzero residue r; the upper unipotent with
        // slope r^{-1} sends x_{-1} there
        let r = v.c().residue().map_err(|_| GeoError::Internal("sphere-1 vertex with fractional label"))?;
        debug_assert_eq!(v.m(), 1);
        let r_inv = f.from_int(mod_inverse_u64(r, f.p()) as i64);
        Mat2::new(f.one(), r_inv, f.zero(), f.one()).expect("unipotent")
    };
    let alpha = Mat2::swap(f);
    let i2 = alpha.mul(&i1.inv()).mul(k);
    let out = GeoDecomposition::KCosetReflected { i1, i2 };
    if !out.verify(k) {
        return Err(GeoError::Internal("k double coset factors failed verification"));
    }
    Ok(out)
}

fn mod_inverse_u64(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Report for the index-q orbit verification: q unipotent elements fixing the
/// halfline [x_k, omega) pointwise move x_{k-1} transitively through
/// sphere(x_k, 1) minus {x_{k+1}}.
#[derive(Debug, Clone)]
pub struct NkOrbitReport {
    pub k: i64,
    pub q: u64,
    pub orbit: Vec<Vertex>,
    pub elements: Vec<Mat2>,
    pub ok: bool,
}

pub fn nk_orbit_check(field: Field, k: i64) -> NkOrbitReport {
    let p = field.p();
    let omega = End::omega(field);
    let xk = standard_vertex(field, k);
    let xk_prev = standard_vertex(field, k - 1);
    let xk_next = standard_vertex(field, k + 1);

    let mut elements = Vec::new();
    let mut orbit = Vec::new();
    let mut all_fix = true;
    for r in 0..p {
        let slope = &field.from_int(r as i64) * &field.uniformizer_pow(-k);
        let u = Mat2::new(field.one(), slope, field.zero(), field.one()).expect("unipotent");
        // fixes [x_k, omega) pointwise and stabilizes omega
        for i in k..=k + 4 {
            if act(&u, &standard_vertex(field, i)) != standard_vertex(field, i) {
                all_fix = false;
            }
        }
        if !crate::tree::stabilizes_end(&u, &omega) {
            all_fix = false;
        }
        orbit.push(act(&u, &xk_prev));
        elements.push(u);
    }
    orbit.sort();
    orbit.dedup();
    let mut target: Vec<Vertex> = sphere(&xk, 1)
        .into_iter()
        .filter(|v| v != &xk_next)
        .collect();
    target.sort();
    let ok = all_fix && orbit.len() as u64 == p && orbit == target;
    NkOrbitReport {
        k,
        q: p,
        orbit,
        elements,
        ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn q3() -> Field {
        Field::qp(3).unwrap()
    }

    #[test]
    fn iwasawa_geo_examples() {
        let f = q3();
        let id = Mat2::identity(f);
        match iwasawa_geo(&id) {
            GeoDecomposition::Iwasawa { k, b } => {
                assert_eq!(k, id);
                assert_eq!(b, id);
            }
            _ => unreachable!(),
        }
        let g = f.parse_mat2("1,2;1/3,5").unwrap();
        let d = iwasawa_geo(&g);
        assert!(d.verify(&g));
        assert_eq!(d.recompose(), g);
    }

    #[test]
    fn cartan_geo_examples() {
        let f = q3();
        let g = Mat2::diagonal(f.one(), f.uniformizer_pow(3)).unwrap();
        match cartan_geo(&g).unwrap() {
            GeoDecomposition::Cartan { power, .. } => assert_eq!(power, 3),
            _ => unreachable!(),
        }
        let g = f.parse_mat2("1,2;1/3,5").unwrap();
        let d = cartan_geo(&g).unwrap();
        assert!(d.verify(&g));
        if let GeoDecomposition::Cartan { power, .. } = &d {
            assert_eq!(*power as u64, distance(&base_vertex(f), &act(&g, &base_vertex(f))));
        }
    }

    #[test]
    fn bruhat_geo_examples() {
        let f = q3();
        let upper = f.parse_mat2("1,2;0,3").unwrap();
        assert!(matches!(bruhat_geo(&upper), GeoDecomposition::BruhatEnd { .. }));
        let g = f.parse_mat2("1,2;1/3,5").unwrap();
        let d = bruhat_geo(&g);
        assert!(matches!(d, GeoDecomposition::BruhatReflected { .. }));
        assert!(d.verify(&g));
    }

    #[test]
    fn levi_geo_examples() {
        let f = q3();
        // [[p,1],[0,1]] translates by -1 along the apartment
        let b = f.parse_mat2("3,1;0,1").unwrap();
        let d = levi_geo(&b).unwrap();
        match &d {
            GeoDecomposition::Levi { power, n_part } => {
                assert_eq!(*power, -1);
                // tau^{-power} * b fixes some x_i
                let idx = elliptic_fixed_index(n_part).expect("elliptic factor");
                let xi = standard_vertex(f, idx);
                assert_eq!(act(n_part, &xi), xi);
            }
            _ => unreachable!(),
        }
        assert!(d.verify(&b));
        let not_b = f.parse_mat2("1,0;1,1").unwrap();
        assert!(levi_geo(&not_b).is_err());
    }

    #[test]
    fn iwahori_geo_examples() {
        let f = q3();
        let i = f.parse_mat2("1,1;3,4").unwrap();
        let d = iwahori_geo(&i).unwrap();
        assert!(d.verify(&i));
        // scaled input still factors (projective recomposition)
        let i_scaled = i.scale(&f.uniformizer_pow(2)).unwrap();
        let d = iwahori_geo(&i_scaled).unwrap();
        assert!(d.verify(&i_scaled));
        let not_i = f.parse_mat2("1,0;1,1").unwrap();
        assert!(iwahori_geo(&not_i).is_err());
    }

    #[test]
    fn k_double_coset_examples() {
        let f = q3();
        let s = Mat2::swap(f);
        match k_double_coset(&s).unwrap() {
            GeoDecomposition::KCosetReflected { i1, i2 } => {
                assert_eq!(i1, Mat2::identity(f));
                assert_eq!(i2, Mat2::identity(f));
            }
            _ => panic!("s moves x_1"),
        }
        let i = f.parse_mat2("1,1;3,4").unwrap();
        assert!(matches!(
            k_double_coset(&i).unwrap(),
            GeoDecomposition::KCosetEdge { .. }
        ));
        let k = f.parse_mat2("1,1;1,2").unwrap();
        let d = k_double_coset(&k).unwrap();
        assert!(d.verify(&k));
        let tau = Mat2::diagonal(f.one(), f.uniformizer()).unwrap();
        assert!(k_double_coset(&tau).is_err());
    }

    #[test]
    fn nk_orbit_examples() {
        let f = q3();
        let rep = nk_orbit_check(f, 0);
        assert!(rep.ok);
        assert_eq!(rep.orbit.len(), 3);
        let f2 = Field::qp(2).unwrap();
        for k in -2..=2 {
            let rep = nk_orbit_check(f2, k);
            assert!(rep.ok, "k = {k}");
            assert_eq!(rep.q, 2);
        }
    }
}
