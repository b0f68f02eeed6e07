//! The Bruhat-Tits tree of PGL2(F): vertices are lattice classes in canonical
//! form, together with adjacency, distance, geodesics, spheres and balls,
//! ends, apartments, crossroads, and the GL2 action.
//!
//! Canonical vertex encoding: (m, c) is the class of the lattice
//! o*(e1 + c*e2) + pi^m * o * e2, where c is the canonical representative of
//! its class mod pi^m * o (for Q_p: a rational in [0, p^m) with denominator a
//! power of p; for F_p((t)): a Laurent polynomial with exponents below m).
//! With this encoding the standard apartment is x_n = (n, 0), diag(1, pi)
//! translates x_n to x_{n+1}, and the end [1:0] sits at the +infinity side.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar, Valuation};
use crate::gl2::{elementary_divisors, Gl2Error, Mat2};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertices are not adjacent")]
    NotAdjacent,
    #[error("not a path: vertices must be distinct and consecutive-adjacent")]
    NotAPath,
    #[error("zero vector does not define a projective point")]
    ZeroVector,
    #[error("the two ends must be distinct")]
    EqualEnds,
    #[error("the ends must be pairwise distinct")]
    NotDistinct,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Gl2(#[from] Gl2Error),
}

// ---------------------------------------------------------------------------
// Vertices
// ---------------------------------------------------------------------------

/// A vertex of the tree: the canonical representative of a lattice class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    m: i64,
    c: Scalar,
}

impl Vertex {
    /// Builds (m, c), canonicalizing c mod pi^m.
    pub fn new(m: i64, c: &Scalar) -> Vertex {
        Vertex {
            m,
            c: c.mod_uniformizer_pow(m),
        }
    }

    pub fn field(&self) -> Field {
        self.c.field()
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    /// Canonical lattice basis [[1, 0],[c, pi^m]] (columns generate).
    pub fn lattice_matrix(&self) -> Mat2 {
        let f = self.field();
        Mat2::new(f.one(), f.zero(), self.c.clone(), f.uniformizer_pow(self.m))
            .expect("canonical basis is invertible")
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.m, self.c)
    }
}

/// The standard apartment vertex x_n, the class of o*e1 + pi^n*o*e2.
pub fn standard_vertex(field: Field, n: i64) -> Vertex {
    Vertex {
        m: n,
        c: field.zero(),
    }
}

/// The base vertex x_0.
pub fn base_vertex(field: Field) -> Vertex {
    standard_vertex(field, 0)
}

/// Canonical vertex of the lattice class spanned by the columns of g.
/// Constant on cosets g*K and on central scalings.
pub fn vertex_of_lattice(g: &Mat2) -> Vertex {
    // Column Hermite form, lower triangular, then center-normalize.
    let (x, y, other_of_x) = if g.b().valuation() < g.a().valuation() {
        (g.b().clone(), g.d().clone(), (g.a().clone(), g.c().clone()))
    } else {
        (g.a().clone(), g.c().clone(), (g.b().clone(), g.d().clone()))
    };
    // columns now (x, y) and other; eliminate the top entry of the other column
    let q = &other_of_x.0 * &x.inv().expect("pivot has minimal valuation in the top row");
    let z = &other_of_x.1 - &(&q * &y);
    // lattice = o*(x, y) + o*(0, z); center-normalize by 1/x
    let m = (z.valuation() + x.inv().expect("x nonzero").valuation())
        .finite()
        .expect("z nonzero for invertible g");
    let c = &y * &x.inv().expect("x nonzero");
    Vertex::new(m, &c)
}

/// Action of g on a vertex: the class of g applied to the lattice.
pub fn act(g: &Mat2, x: &Vertex) -> Vertex {
    vertex_of_lattice(&g.mul(&x.lattice_matrix()))
}

/// The q+1 neighbors of x: the q classes one level down (children) in residue
/// order 0..p-1, then the parent (m-1, c truncated).
pub fn neighbors(x: &Vertex) -> Vec<Vertex> {
    let f = x.field();
    let pi_m = f.uniformizer_pow(x.m);
    let mut out: Vec<Vertex> = f
        .residue_reps()
        .iter()
        .map(|r| Vertex::new(x.m + 1, &(&x.c + &(r * &pi_m))))
        .collect();
    out.push(Vertex::new(x.m - 1, &x.c));
    out
}

/// Tree distance, computed from the elementary divisors of g_x^{-1} g_y.
pub fn distance(x: &Vertex, y: &Vertex) -> u64 {
    let rel = x.lattice_matrix().inv().mul(&y.lattice_matrix());
    let (a, b) = elementary_divisors(&rel);
    (b - a) as u64
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

/// A finite path: distinct vertices, consecutive ones adjacent. In a tree this
/// is the unique geodesic between its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Result<Path, TreeError> {
        if vertices.is_empty() {
            return Err(TreeError::NotAPath);
        }
        for w in vertices.windows(2) {
            if distance(&w[0], &w[1]) != 1 {
                return Err(TreeError::NotAdjacent);
            }
        }
        let set: BTreeSet<&Vertex> = vertices.iter().collect();
        if set.len() != vertices.len() {
            return Err(TreeError::NotAPath);
        }
        Ok(Path { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len_edges(&self) -> u64 {
        (self.vertices.len() - 1) as u64
    }

    pub fn first(&self) -> &Vertex {
        self.vertices.first().expect("nonempty")
    }

    pub fn last(&self) -> &Vertex {
        self.vertices.last().expect("nonempty")
    }

    pub fn reversed(&self) -> Path {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Path { vertices }
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.vertices.contains(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" - "))
    }
}

/// The unique geodesic from x to y: ascend from x to the join of the two
/// vertices, then descend to y.
pub fn geodesic(x: &Vertex, y: &Vertex) -> Path {
    let diff_v = (&x.c - &y.c).valuation();
    let mut join = x.m.min(y.m);
    if let Valuation::Finite(v) = diff_v {
        join = join.min(v);
    }
    let mut vertices = Vec::new();
    for m in (join..=x.m).rev() {
        vertices.push(Vertex::new(m, &x.c));
    }
    for m in (join + 1)..=y.m {
        vertices.push(Vertex::new(m, &y.c));
    }
    debug_assert_eq!(vertices.len() as u64, distance(x, y) + 1);
    Path { vertices }
}

// ---------------------------------------------------------------------------
// Edges
// ---------------------------------------------------------------------------

/// An unordered pair of adjacent vertices, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    pub fn new(x: Vertex, y: Vertex) -> Result<Edge, TreeError> {
        if distance(&x, &y) != 1 {
            return Err(TreeError::NotAdjacent);
        }
        Ok(if x <= y {
            Edge { lo: x, hi: y }
        } else {
            Edge { lo: y, hi: x }
        })
    }

    pub fn endpoints(&self) -> (&Vertex, &Vertex) {
        (&self.lo, &self.hi)
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        &self.lo == v || &self.hi == v
    }

    pub fn other(&self, v: &Vertex) -> &Vertex {
        if &self.lo == v {
            &self.hi
        } else {
            &self.lo
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.lo, self.hi)
    }
}

// ---------------------------------------------------------------------------
// Spheres and balls
// ---------------------------------------------------------------------------

/// Sphere of radius r around x, sorted.
pub fn sphere(x: &Vertex, r: u64) -> Vec<Vertex> {
    ball_layers(x, r).pop().expect("radius layer exists")
}

/// Ball of radius r around x, sorted.
pub fn ball(x: &Vertex, r: u64) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = ball_layers(x, r).into_iter().flatten().collect();
    out.sort();
    out
}

/// BFS layers 0..=r, each sorted.
pub fn ball_layers(x: &Vertex, r: u64) -> Vec<Vec<Vertex>> {
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    seen.insert(x.clone());
    let mut layers = vec![vec![x.clone()]];
    for _ in 0..r {
        let prev = layers.last().expect("nonempty");
        let mut next = BTreeSet::new();
        for v in prev {
            for n in neighbors(v) {
                if !seen.contains(&n) {
                    next.insert(n);
                }
            }
        }
        for v in &next {
            seen.insert(v.clone());
        }
        layers.push(next.into_iter().collect());
    }
    layers
}

/// Vertices within distance e of the edge (the union of the two balls).
pub fn edge_ball(eta: &Edge, e: u64) -> Vec<Vertex> {
    let mut set: BTreeSet<Vertex> = ball(&eta.lo, e).into_iter().collect();
    set.extend(ball(&eta.hi, e));
    set.into_iter().collect()
}

/// DOT graph text for the ball of radius r around x: vertex labels "(m;c)",
/// unlabeled undirected edges, deterministic emission order.
pub fn ball_dot(x: &Vertex, r: u64) -> String {
    let verts = ball(x, r);
    let set: BTreeSet<&Vertex> = verts.iter().collect();
    let mut out = String::from("graph {\n");
    for v in &verts {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    let mut edges = BTreeSet::new();
    for v in &verts {
        for n in neighbors(v) {
            if set.contains(&n) {
                let (lo, hi) = if *v <= n { (v.clone(), n) } else { (n, v.clone()) };
                edges.insert((lo, hi));
            }
        }
    }
    for (lo, hi) in edges {
        out.push_str(&format!("  \"{lo}\" -- \"{hi}\";\n"));
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Ends
// ---------------------------------------------------------------------------

/// A point of the boundary: a line in F^2, canonicalized to [1:0] or [u:1].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct End {
    // None encodes [1:0]; Some(u) encodes [u:1].
    slope: Option<Scalar>,
    field: Field,
}

impl End {
    pub fn field(&self) -> Field {
        self.field
    }

    /// The end omega = [1:0] of the standard apartment (the x_{+n} side).
    pub fn omega(field: Field) -> End {
        End { slope: None, field }
    }

    /// The opposite end omega' = [0:1] (the x_{-n} side).
    pub fn omega_prime(field: Field) -> End {
        End {
            slope: Some(field.zero()),
            field,
        }
    }

    /// Homogeneous coordinates (u, v) of the canonical representative.
    pub fn coords(&self) -> (Scalar, Scalar) {
        match &self.slope {
            None => (self.field.one(), self.field.zero()),
            Some(u) => (u.clone(), self.field.one()),
        }
    }

    /// Image under the column action of g.
    pub fn apply(&self, g: &Mat2) -> End {
        let (u, v) = self.coords();
        let (nu, nv) = g.apply(&u, &v);
        end_canonical(&nu, &nv).expect("invertible image of a line")
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.slope {
            None => write!(f, "[1:0]"),
            Some(u) => write!(f, "[{u}:1]"),
        }
    }
}

/// Canonical end for the line spanned by (u, v).
pub fn end_canonical(u: &Scalar, v: &Scalar) -> Result<End, TreeError> {
    let field = u.field();
    if v.is_zero() {
        if u.is_zero() {
            return Err(TreeError::ZeroVector);
        }
        return Ok(End { slope: None, field });
    }
    Ok(End {
        slope: Some(u * &v.inv().expect("v nonzero")),
        field,
    })
}

/// True iff g fixes the line of omega (eigenvector condition). For [1:0] this
/// is exactly upper-triangularity.
pub fn stabilizes_end(g: &Mat2, omega: &End) -> bool {
    let (u, v) = omega.coords();
    let (nu, nv) = g.apply(&u, &v);
    // (nu, nv) parallel to (u, v)
    (&nu * &v) == (&nv * &u)
}

/// One step from x along the unique halfline [x, omega]: the lattice
/// (L meet line) + pi*L.
pub fn halfline_step(x: &Vertex, omega: &End) -> Vertex {
    let f = x.field();
    let m = x.lattice_matrix();
    let (u, v) = omega.coords();
    let (z1, z2) = m.inv().apply(&u, &v);
    let k = -z1.valuation().min(z2.valuation()).finite().expect("(u,v) nonzero");
    let pi_k = f.uniformizer_pow(k);
    let w1 = &pi_k * &u;
    let w2 = &pi_k * &v;
    let pi = f.uniformizer();
    // replace the basis column whose coordinate became a unit
    let next = if (&pi_k * &z1).valuation() == Valuation::Finite(0) {
        Mat2::new(w1, &pi * m.b(), w2, &pi * m.d())
    } else {
        Mat2::new(w1, &pi * m.a(), w2, &pi * m.c())
    }
    .expect("lattice basis");
    let y = vertex_of_lattice(&next);
    debug_assert_eq!(distance(x, &y), 1);
    y
}

/// The first len+1 vertices of the halfline [x, omega].
pub fn halfline(x: &Vertex, omega: &End, len: u64) -> Path {
    let mut vertices = vec![x.clone()];
    for _ in 0..len {
        let next = halfline_step(vertices.last().expect("nonempty"), omega);
        vertices.push(next);
    }
    Path { vertices }
}

/// True iff v lies on the apartment [omega1, omega2]: the halflines toward
/// the two ends leave v in different directions.
pub fn on_apartment(v: &Vertex, omega1: &End, omega2: &End) -> bool {
    halfline_step(v, omega1) != halfline_step(v, omega2)
}

/// A matrix whose columns span the two end lines; maps the standard apartment
/// onto [omega1, omega2] with [1:0] going to omega1.
pub fn apartment_frame(omega1: &End, omega2: &End) -> Result<Mat2, TreeError> {
    if omega1 == omega2 {
        return Err(TreeError::EqualEnds);
    }
    let (u1, v1) = omega1.coords();
    let (u2, v2) = omega2.coords();
    Ok(Mat2::new(u1, u2, v1, v2).expect("distinct lines are independent"))
}

/// Finite window of the apartment [omega1, omega2], centered at the vertex
/// nearest x_0 and running from the omega1 side to the omega2 side.
pub fn apartment_window(omega1: &End, omega2: &End, radius: u64) -> Result<Path, TreeError> {
    let frame = apartment_frame(omega1, omega2)?;
    let f = omega1.field();
    let u = act(&frame.inv(), &base_vertex(f));
    // nearest apartment point to x0 in standard coordinates
    let center = match u.c().valuation() {
        Valuation::Infinity => u.m(),
        Valuation::Finite(v) => v,
    };
    let r = radius as i64;
    let mut vertices = Vec::with_capacity(2 * radius as usize + 1);
    for n in (center - r..=center + r).rev() {
        vertices.push(act(&frame, &standard_vertex(f, n)));
    }
    Ok(Path { vertices })
}

/// The unique common vertex of the three pairwise apartments (the median).
pub fn crossroad(omega1: &End, omega2: &End, omega3: &End) -> Result<Vertex, TreeError> {
    if omega1 == omega2 || omega1 == omega3 || omega2 == omega3 {
        return Err(TreeError::NotDistinct);
    }
    // Express omega3 in the frame of (omega1, omega2): the crossroad is the
    // image of x_0 under the rescaled frame, by equivariance from the
    // standard triple ([1:0], [0:1], [1:1]) whose crossroad is x_0.
    let frame = apartment_frame(omega1, omega2)?;
    let (u3, v3) = omega3.coords();
    let (l1, l2) = frame.inv().apply(&u3, &v3);
    let (u1, v1) = omega1.coords();
    let (u2, v2) = omega2.coords();
    let g = Mat2::new(&l1 * &u1, &l2 * &u2, &l1 * &v1, &l2 * &v2)
        .expect("nonzero coordinates for distinct ends");
    Ok(act(&g, &base_vertex(omega1.field())))
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

impl Field {
    /// Parses the vertex syntax "(m;c)".
    pub fn parse_vertex(&self, s: &str) -> Result<Vertex, TreeError> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| TreeError::Parse(format!("expected (m;c), got {s:?}")))?;
        let (m, c) = body
            .split_once(';')
            .ok_or_else(|| TreeError::Parse(format!("expected (m;c), got {s:?}")))?;
        let m: i64 = m
            .trim()
            .parse()
            .map_err(|_| TreeError::Parse(format!("bad level: {m:?}")))?;
        let c = self.parse_scalar(c)?;
        let v = Vertex::new(m, &c);
        if v.c() != &c {
            return Err(TreeError::Parse(format!(
                "non-canonical vertex: {s:?} (canonical c is {})",
                v.c()
            )));
        }
        Ok(v)
    }

    /// Parses the end syntax "[u:v]".
    pub fn parse_end(&self, s: &str) -> Result<End, TreeError> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| TreeError::Parse(format!("expected [u:v], got {s:?}")))?;
        let (u, v) = body
            .split_once(':')
            .ok_or_else(|| TreeError::Parse(format!("expected [u:v], got {s:?}")))?;
        end_canonical(&self.parse_scalar(u)?, &self.parse_scalar(v)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::{member, SubgroupTag};

    fn q3() -> Field {
        Field::qp(3).unwrap()
    }

    #[test]
    fn standard_vertices_and_lattices() {
        let f = q3();
        assert_eq!(standard_vertex(f, 0), base_vertex(f));
        for n in -3..=3 {
            let g = Mat2::diagonal(f.one(), f.uniformizer_pow(n)).unwrap();
            assert_eq!(vertex_of_lattice(&g), standard_vertex(f, n));
        }
        assert_eq!(distance(&standard_vertex(f, 0), &standard_vertex(f, 5)), 5);
        assert_eq!(
            distance(&standard_vertex(f, 0), &standard_vertex(f, 1)),
            1
        );
        assert_eq!(
            distance(&standard_vertex(f, 0), &standard_vertex(f, -1)),
            1
        );
    }

    #[test]
    fn lattice_vertex_invariance() {
        let f = q3();
        let g = f.parse_mat2("1,2;9,1/3").unwrap();
        let v = vertex_of_lattice(&g);
        // right multiplication by K elements preserves the class
        for k_str in ["1,1;0,1", "0,1;1,0", "2,0;0,1", "1,0;3,1"] {
            let k = f.parse_mat2(k_str).unwrap();
            assert!(member(&k, SubgroupTag::K));
            assert_eq!(vertex_of_lattice(&g.mul(&k)), v);
        }
        // central scaling preserves the class
        let z = g.scale(&f.from_ratio(-9, 2).unwrap()).unwrap();
        assert_eq!(vertex_of_lattice(&z), v);
    }

    #[test]
    fn action_examples() {
        let f = q3();
        let x0 = base_vertex(f);
        let g = f.parse_mat2("1,2;9,1/3").unwrap();
        let v = act(&g, &x0);
        assert_eq!(act(&Mat2::identity(f), &v), v);
        // K fixes x0
        let k = f.parse_mat2("2,1;3,2").unwrap();
        assert!(member(&k, SubgroupTag::K));
        assert_eq!(act(&k, &x0), x0);
        // tau translates the standard apartment
        let tau = Mat2::diagonal(f.one(), f.uniformizer()).unwrap();
        for n in -3..=3 {
            assert_eq!(act(&tau, &standard_vertex(f, n)), standard_vertex(f, n + 1));
        }
    }

    #[test]
    fn neighbor_structure() {
        let f = q3();
        let x0 = base_vertex(f);
        let ns = neighbors(&x0);
        assert_eq!(ns.len(), 4);
        assert!(ns.contains(&standard_vertex(f, 1)));
        assert!(ns.contains(&standard_vertex(f, -1)));
        for n in &ns {
            assert_eq!(distance(&x0, n), 1);
        }
        // symmetry of adjacency on a small ball
        for v in ball(&x0, 3) {
            for n in neighbors(&v) {
                assert!(neighbors(&n).contains(&v), "adjacency symmetric at {v}");
            }
        }
        // p = 2 has 3 neighbors
        let f2 = Field::qp(2).unwrap();
        assert_eq!(neighbors(&base_vertex(f2)).len(), 3);
    }

    #[test]
    fn sphere_sizes() {
        let f = q3();
        let x0 = base_vertex(f);
        assert_eq!(ball(&x0, 0).len(), 1);
        assert_eq!(sphere(&x0, 1).len(), 4);
        assert_eq!(sphere(&x0, 2).len(), 12);
        assert_eq!(sphere(&x0, 3).len(), 36);
    }

    #[test]
    fn geodesic_examples() {
        let f = q3();
        let x0 = standard_vertex(f, 0);
        let x3 = standard_vertex(f, 3);
        let g = geodesic(&x0, &x3);
        let expect: Vec<Vertex> = (0..=3).map(|n| standard_vertex(f, n)).collect();
        assert_eq!(g.vertices(), &expect[..]);
        // geodesic endpoints and length for a non-apartment pair
        let a = f.parse_vertex("(2;1/3)").unwrap();
        let b = f.parse_vertex("(1;2/3)").unwrap();
        let g = geodesic(&a, &b);
        assert_eq!(g.first(), &a);
        assert_eq!(g.last(), &b);
        assert_eq!(g.len_edges(), distance(&a, &b));
    }

    #[test]
    fn halfline_examples() {
        let f = q3();
        let x0 = base_vertex(f);
        let omega = End::omega(f);
        let omega_p = End::omega_prime(f);
        let h = halfline(&x0, &omega, 3);
        let expect: Vec<Vertex> = (0..=3).map(|n| standard_vertex(f, n)).collect();
        assert_eq!(h.vertices(), &expect[..]);
        let h = halfline(&x0, &omega_p, 3);
        let expect: Vec<Vertex> = (0..=3).map(|n| standard_vertex(f, -n)).collect();
        assert_eq!(h.vertices(), &expect[..]);
        assert_eq!(halfline(&x0, &omega, 0).vertices(), &[x0.clone()][..]);
        // halflines toward the same end from different start points merge
        let y = f.parse_vertex("(1;1)").unwrap();
        let hx: BTreeSet<Vertex> = halfline(&x0, &omega, 8).vertices().iter().cloned().collect();
        let hy = halfline(&y, &omega, 8);
        let tail_in_common = hy.vertices().iter().filter(|v| hx.contains(v)).count();
        assert!(tail_in_common >= 6, "halflines to the same end merge");
    }

    #[test]
    fn stabilizes_end_examples() {
        let f = q3();
        let omega = End::omega(f);
        let upper = f.parse_mat2("2,5;0,1/3").unwrap();
        assert!(stabilizes_end(&upper, &omega));
        let s = Mat2::swap(f);
        assert!(!stabilizes_end(&s, &omega));
        assert_eq!(omega.apply(&s), End::omega_prime(f));
    }

    #[test]
    fn apartment_window_examples() {
        let f = q3();
        let omega = End::omega(f);
        let omega_p = End::omega_prime(f);
        let w = apartment_window(&omega_p, &omega, 2).unwrap();
        let expect: Vec<Vertex> = (-2..=2).map(|n| standard_vertex(f, n)).collect();
        assert_eq!(w.vertices(), &expect[..]);
        let w2 = apartment_window(&omega, &omega_p, 2).unwrap();
        assert_eq!(w2, w.reversed());
        assert_eq!(
            apartment_window(&omega, &omega, 1),
            Err(TreeError::EqualEnds)
        );
        // every window vertex lies on one of the two halflines from the center
        let e1 = f.parse_end("[1/3:1]").unwrap();
        let e2 = f.parse_end("[2:1]").unwrap();
        let w = apartment_window(&e1, &e2, 3).unwrap();
        let center = &w.vertices()[3];
        let h1: Vec<Vertex> = halfline(center, &e1, 4).vertices().to_vec();
        let h2: Vec<Vertex> = halfline(center, &e2, 4).vertices().to_vec();
        for v in w.vertices() {
            assert!(h1.contains(v) || h2.contains(v));
        }
    }

    #[test]
    fn crossroad_examples() {
        let f = q3();
        let o1 = End::omega(f);
        let o2 = End::omega_prime(f);
        let o3 = f.parse_end("[1:1]").unwrap();
        assert_eq!(crossroad(&o1, &o2, &o3).unwrap(), base_vertex(f));
        // permutation invariance
        assert_eq!(crossroad(&o2, &o3, &o1).unwrap(), base_vertex(f));
        assert_eq!(crossroad(&o3, &o1, &o2).unwrap(), base_vertex(f));
        assert_eq!(
            crossroad(&o1, &o1, &o3),
            Err(TreeError::NotDistinct)
        );
    }

    #[test]
    fn vertex_parse_roundtrip() {
        let f = q3();
        for s in ["(0;0)", "(2;7/3)", "(-1;1/9)", "(3;5)"] {
            let v = f.parse_vertex(s).unwrap();
            assert_eq!(f.parse_vertex(&v.to_string()).unwrap(), v);
        }
        // non-canonical rejected: c must already be reduced mod pi^m
        assert!(f.parse_vertex("(0;1)").is_err());
        assert!(f.parse_vertex("(1;5)").is_err());

        let l = Field::laurent(2).unwrap();
        let v = l.parse_vertex("(2;t^-1 + 1 + t)").unwrap();
        assert_eq!(l.parse_vertex(&v.to_string()).unwrap(), v);
    }

    #[test]
    fn dot_export() {
        let f = Field::qp(2).unwrap();
        let dot = ball_dot(&base_vertex(f), 2);
        assert_eq!(dot.matches(";\n").count() - dot.matches("--").count(), 10);
        assert_eq!(dot.matches("--").count(), 9);
        assert!(dot.starts_with("graph {"));
        // deterministic
        assert_eq!(dot, ball_dot(&base_vertex(f), 2));
    }
}
