//! Constructive weak-2-transitivity witnesses. Every operation post-verifies
//! its output on the defining constraints and never returns an unverified
//! witness.

use crate::gl2::{cartan, Mat2};
use crate::tree::{
    act, apartment_frame, base_vertex, distance, standard_vertex, End, Vertex,
};

use super::GeoError;

/// An element of K (up to the recorded Cartan factors) fixing x_0 and moving
/// v to the standard sphere representative (r, 0), r = d(x_0, v).
pub fn vertex_to_standard(v: &Vertex) -> Result<Mat2, GeoError> {
    let f = v.field();
    let form = cartan(&v.lattice_matrix());
    let k = form.k1.inv();
    let r = distance(&base_vertex(f), v);
    let target = standard_vertex(f, r as i64);
    if act(&k, v) != target || act(&k, &base_vertex(f)) != base_vertex(f) {
        return Err(GeoError::Internal("sphere normalization failed verification"));
    }
    Ok(k)
}

/// Witness for sphere transitivity: g with g(x) = x and g(y) = z, given
/// d(x, y) = d(x, z).
pub fn sphere_witness(x: &Vertex, y: &Vertex, z: &Vertex) -> Result<Mat2, GeoError> {
    if distance(x, y) != distance(x, z) {
        return Err(GeoError::DistanceMismatch);
    }
    // move x to x_0, normalize both sphere points, conjugate back
    let h = x.lattice_matrix();
    let h_inv = h.inv();
    let y0 = act(&h_inv, y);
    let z0 = act(&h_inv, z);
    let ky = vertex_to_standard(&y0)?;
    let kz = vertex_to_standard(&z0)?;
    let g = h.mul(&kz.inv()).mul(&ky).mul(&h_inv);
    if act(&g, x) != *x || act(&g, y) != *z {
        return Err(GeoError::Internal("sphere witness failed verification"));
    }
    Ok(g)
}

/// Witness for weak 2-transitivity: g with g(x1) = y1 and g(x2) = y2, given
/// d(x1, x2) = d(y1, y2). Built as in the transitivity argument: map x1 to
/// y1 by vertex transitivity, then correct within the sphere around y1.
pub fn weak2_witness(
    x1: &Vertex,
    x2: &Vertex,
    y1: &Vertex,
    y2: &Vertex,
) -> Result<Mat2, GeoError> {
    if distance(x1, x2) != distance(y1, y2) {
        return Err(GeoError::DistanceMismatch);
    }
    let g1 = y1.lattice_matrix().mul(&x1.lattice_matrix().inv());
    let moved = act(&g1, x2);
    let k = sphere_witness(y1, &moved, y2)?;
    let g = k.mul(&g1);
    if act(&g, x1) != *y1 || act(&g, x2) != *y2 {
        return Err(GeoError::Internal("weak-2 witness failed verification"));
    }
    Ok(g)
}

/// Witness mapping a marked apartment to a marked apartment: g(x) = y,
/// g(omega_i) = sigma_i. Requires x on [omega1, omega2] and y on
/// [sigma1, sigma2].
pub fn end_pair_witness(
    x: &Vertex,
    omega1: &End,
    omega2: &End,
    y: &Vertex,
    sigma1: &End,
    sigma2: &End,
) -> Result<Mat2, GeoError> {
    let h1 = marked_apartment_frame(x, omega1, omega2)?;
    let h2 = marked_apartment_frame(y, sigma1, sigma2)?;
    let g = h2.mul(&h1.inv());
    if act(&g, x) != *y || &omega1.apply(&g) != sigma1 || &omega2.apply(&g) != sigma2 {
        return Err(GeoError::Internal("end pair witness failed verification"));
    }
    Ok(g)
}

/// Frame sending (x_0, [1:0], [0:1]) to (x, omega1, omega2); errors if x is
/// not on the apartment.
fn marked_apartment_frame(x: &Vertex, omega1: &End, omega2: &End) -> Result<Mat2, GeoError> {
    let frame = apartment_frame(omega1, omega2)?;
    let u = act(&frame.inv(), x);
    if !u.c().is_zero() {
        return Err(GeoError::VertexNotOnApartment);
    }
    let f = x.field();
    let tau_n = Mat2::diagonal(f.one(), f.uniformizer_pow(u.m())).expect("invertible");
    Ok(frame.mul(&tau_n))
}
