//! Classification of tree automorphisms induced by GL2 elements, and the
//! distinguished elements alpha and tau of the standard apartment.

use crate::field::{Field, Valuation};
use crate::gl2::{elementary_divisors, Mat2};
use crate::tree::{
    act, base_vertex, distance, geodesic, halfline_step, neighbors, standard_vertex, Edge, End,
    Path, Vertex,
};

use super::GeoError;

/// Type of the automorphism induced on the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutClass {
    /// Fixes a vertex; one such vertex is carried.
    Elliptic { fixed: Vertex },
    /// Swaps the endpoints of an edge.
    Inversion { edge: Edge },
    /// Translates by `length` along an axis; a window of the axis around a
    /// minimal-displacement vertex is carried.
    Hyperbolic { length: u64, axis_window: Path },
}

/// The distinguished elements of the standard apartment:
/// alpha = s reflects (x_n -> x_{-n}), tau = diag(1, pi) translates
/// (x_n -> x_{n+1}). Both actions are checked on n in [-4, 4].
pub fn alpha_tau(field: Field) -> (Mat2, Mat2) {
    let alpha = Mat2::swap(field);
    let tau = Mat2::diagonal(field.one(), field.uniformizer()).expect("invertible");
    for n in -4..=4 {
        assert_eq!(act(&alpha, &standard_vertex(field, n)), standard_vertex(field, -n));
        assert_eq!(act(&tau, &standard_vertex(field, n)), standard_vertex(field, n + 1));
    }
    (alpha, tau)
}

fn displacement(g: &Mat2, v: &Vertex) -> u64 {
    distance(v, &act(g, v))
}

/// Walks from x_0 downhill in displacement until reaching `target`.
/// The displacement function is target + 2 * (distance to the minimal set),
/// so from any vertex off the set exactly one neighbor decreases it.
fn descend_to_displacement(g: &Mat2, target: u64, max_steps: u64) -> Result<Vertex, GeoError> {
    let mut v = base_vertex(g.field());
    let mut d = displacement(g, &v);
    let mut steps = 0;
    while d > target {
        if steps >= max_steps {
            return Err(GeoError::Internal("displacement descent exceeded its radius bound"));
        }
        let next = neighbors(&v)
            .into_iter()
            .map(|n| {
                let nd = displacement(g, &n);
                (nd, n)
            })
            .find(|(nd, _)| *nd < d);
        match next {
            Some((nd, n)) => {
                v = n;
                d = nd;
            }
            None => return Err(GeoError::Internal("no descending neighbor at positive displacement")),
        }
        steps += 1;
    }
    Ok(v)
}

/// Newton-polygon classification: hyperbolic iff 2 v(tr) < v(det), with
/// translation length v(det) - 2 v(tr); otherwise an inversion iff v(det) is
/// odd; otherwise elliptic. The carried geometric data (fixed vertex,
/// inverted edge, axis window) is found by displacement descent within the
/// valuation-bounded radius.
pub fn classify(g: &Mat2) -> Result<AutClass, GeoError> {
    let vdet = g
        .det()
        .valuation()
        .finite()
        .expect("invertible matrix");
    let hyperbolic_length = match g.trace().valuation() {
        Valuation::Finite(vt) if 2 * vt < vdet => Some((vdet - 2 * vt) as u64),
        _ => None,
    };
    let (a, b) = elementary_divisors(g);
    let search_bound = ((b - a) as u64).div_ceil(2).max(8) + 1;

    if let Some(length) = hyperbolic_length {
        let v = descend_to_displacement(g, length, search_bound)?;
        let fwd = act(g, &v);
        let back = act(&g.inv(), &v);
        let mut vertices = geodesic(&back, &v).vertices().to_vec();
        vertices.extend(geodesic(&v, &fwd).vertices().iter().skip(1).cloned());
        let axis_window = Path::new(vertices).map_err(|_| GeoError::Internal("axis window is not a path"))?;
        return Ok(AutClass::Hyperbolic { length, axis_window });
    }
    if vdet % 2 != 0 {
        let v = descend_to_displacement(g, 1, search_bound)?;
        let w = act(g, &v);
        if act(g, &w) != v {
            return Err(GeoError::Internal("inversion candidate does not swap its edge"));
        }
        let edge = Edge::new(v, w).map_err(|_| GeoError::Internal("inversion pair not adjacent"))?;
        return Ok(AutClass::Inversion { edge });
    }
    let fixed = descend_to_displacement(g, 0, search_bound)?;
    Ok(AutClass::Elliptic { fixed })
}

/// The two exclusive alternatives for an edge and an end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeEndOrientation {
    /// The first (smaller) endpoint lies on the halfline from the second.
    FirstOnSecondHalfline,
    /// The second (larger) endpoint lies on the halfline from the first.
    SecondOnFirstHalfline,
}

impl EdgeEndOrientation {
    /// The endpoint of `edge` that lies on the halfline from the other one
    /// (equivalently, the endpoint closer to the end).
    pub fn on_halfline<'e>(&self, edge: &'e Edge) -> &'e Vertex {
        let (lo, hi) = edge.endpoints();
        match self {
            EdgeEndOrientation::FirstOnSecondHalfline => lo,
            EdgeEndOrientation::SecondOnFirstHalfline => hi,
        }
    }
}

/// Decides which endpoint of e lies on the halfline from the other one
/// toward sigma. Exactly one alternative holds.
pub fn edge_end_orientation(e: &Edge, sigma: &End) -> EdgeEndOrientation {
    let (lo, hi) = e.endpoints();
    let lo_steps_to_hi = &halfline_step(lo, sigma) == hi;
    let hi_steps_to_lo = &halfline_step(hi, sigma) == lo;
    debug_assert!(lo_steps_to_hi != hi_steps_to_lo, "alternatives are exclusive");
    if lo_steps_to_hi {
        EdgeEndOrientation::SecondOnFirstHalfline
    } else {
        EdgeEndOrientation::FirstOnSecondHalfline
    }
}

/// Membership in the pointwise stabilizer of the standard apartment: the
/// finite check (acts trivially on x_k for |k| <= window) together with the
/// algebraic criterion (diagonal with unit entry ratio), which extends the
/// finite check to every k.
pub fn fixes_standard_apartment(g: &Mat2, window: u64) -> bool {
    let algebraic = g.b().is_zero()
        && g.c().is_zero()
        && g.a().valuation() == g.d().valuation();
    let f = g.field();
    let w = window as i64;
    let finite = (-w..=w).all(|k| act(g, &standard_vertex(f, k)) == standard_vertex(f, k));
    debug_assert_eq!(algebraic, finite, "finite window check must agree with the algebraic criterion");
    algebraic && finite
}
