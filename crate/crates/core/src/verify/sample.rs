//! Deterministic random generators for the verification suites. All sampling
//! flows from a seeded ChaCha stream; unit parts are built from digits so the
//! resulting scalars stay in Z[1/p] (respectively F_p[t, t^-1]), which keeps
//! exact arithmetic small and lets the fast displacement oracle apply.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, Scalar};
use crate::gl2::Mat2;
use crate::tree::{end_canonical, neighbors, End, Vertex};

pub type SuiteRng = ChaCha8Rng;

/// A unit: nonzero lowest digit, up to four digits, random sign (Q_p only).
pub fn rand_unit(rng: &mut SuiteRng, field: Field) -> Scalar {
    let p = field.p();
    let mut digits = [0u64; 4];
    digits[0] = rng.gen_range(1..p);
    for d in digits.iter_mut().skip(1) {
        *d = rng.gen_range(0..p);
    }
    let u = field.from_digits(0, &digits);
    if field.backend() == crate::field::Backend::Qp && rng.gen_bool(0.5) {
        -&u
    } else {
        u
    }
}

/// unit * pi^v with v uniform in [vmin, vmax].
pub fn rand_scalar(rng: &mut SuiteRng, field: Field, vmin: i64, vmax: i64) -> Scalar {
    let v = rng.gen_range(vmin..=vmax);
    &rand_unit(rng, field) * &field.uniformizer_pow(v)
}

/// Invertible matrix with entry valuations in [vmin, vmax].
pub fn rand_mat2(rng: &mut SuiteRng, field: Field, vmin: i64, vmax: i64) -> Mat2 {
    loop {
        let e: Vec<Scalar> = (0..4).map(|_| rand_scalar(rng, field, vmin, vmax)).collect();
        if let Ok(m) = Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
            return m;
        }
    }
}

/// Random integral element with up to four digits.
pub fn rand_integral(rng: &mut SuiteRng, field: Field) -> Scalar {
    let p = field.p();
    let digits: Vec<u64> = (0..4).map(|_| rng.gen_range(0..p)).collect();
    field.from_digits(0, &digits)
}

/// Random element of GL2(o).
pub fn rand_k(rng: &mut SuiteRng, field: Field) -> Mat2 {
    loop {
        let e: Vec<Scalar> = (0..4).map(|_| rand_integral(rng, field)).collect();
        if let Ok(m) = Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
            if m.det().is_unit() {
                return m;
            }
        }
    }
}

/// Random Iwahori element: unit diagonal, integral upper-right, lower-left in
/// the maximal ideal.
pub fn rand_iwahori(rng: &mut SuiteRng, field: Field) -> Mat2 {
    let a = rand_unit(rng, field);
    let d = rand_unit(rng, field);
    let b = rand_integral(rng, field);
    let c = &field.uniformizer() * &rand_integral(rng, field);
    Mat2::new(a, b, c, d).expect("unit diagonal dominates")
}

/// Random upper triangular invertible matrix.
pub fn rand_upper(rng: &mut SuiteRng, field: Field, vmin: i64, vmax: i64) -> Mat2 {
    Mat2::new(
        rand_scalar(rng, field, vmin, vmax),
        rand_scalar(rng, field, vmin, vmax),
        field.zero(),
        rand_scalar(rng, field, vmin, vmax),
    )
    .expect("triangular with nonzero diagonal")
}

/// Random central scaling of g (exercises projective invariance).
pub fn rand_central_scale(rng: &mut SuiteRng, g: &Mat2) -> Mat2 {
    let z = rand_scalar(rng, g.field(), -2, 2);
    g.scale(&z).expect("nonzero scalar")
}

/// Random canonical vertex with level in [-4, 4] and a bounded digit tail.
pub fn rand_vertex(rng: &mut SuiteRng, field: Field) -> Vertex {
    let p = field.p();
    let m: i64 = rng.gen_range(-4..=4);
    let j: i64 = rng.gen_range(0..=3);
    let ndigits = (m + j).max(0) as usize;
    let digits: Vec<u64> = (0..ndigits).map(|_| rng.gen_range(0..p)).collect();
    let c = field.from_digits(-j, &digits);
    Vertex::new(m, &c)
}

/// Random end with coordinate valuations in [-3, 3]; occasionally [1:0].
pub fn rand_end(rng: &mut SuiteRng, field: Field) -> End {
    if rng.gen_range(0..8) == 0 {
        return End::omega(field);
    }
    let u = if rng.gen_range(0..8) == 0 {
        field.zero()
    } else {
        rand_scalar(rng, field, -3, 3)
    };
    let v = rand_scalar(rng, field, -3, 3);
    end_canonical(&u, &v).expect("v nonzero")
}

/// Non-backtracking random walk: a vertex at exactly `dist` from start.
pub fn rand_vertex_at_distance(
    rng: &mut SuiteRng,
    start: &Vertex,
    dist: u64,
) -> Vertex {
    let mut prev: Option<Vertex> = None;
    let mut cur = start.clone();
    for _ in 0..dist {
        let options: Vec<Vertex> = neighbors(&cur)
            .into_iter()
            .filter(|n| Some(n) != prev.as_ref())
            .collect();
        let next = options[rng.gen_range(0..options.len())].clone();
        prev = Some(cur);
        cur = next;
    }
    cur
}
