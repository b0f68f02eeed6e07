//! Independent oracles used by the verification suites: a BFS distance
//! oracle, brute-force minimum-displacement scans (a fixed-width Z[1/p]
//! fast path for Q_p and a generic exact path for both backends), and the
//! exhaustive graft search for the local-agreement counterexample.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;

use crate::field::Field;
use crate::geometry::{BallCenter, LocalAut};
use crate::gl2::Mat2;
use crate::tree::{act, ball, base_vertex, distance, neighbors, standard_vertex, Edge, Vertex};

// ---------------------------------------------------------------------------
// BFS distance oracle
// ---------------------------------------------------------------------------

/// Ball around x as an explicit graph: sorted vertices plus adjacency lists.
pub struct BallGraph {
    pub vertices: Vec<Vertex>,
    pub adj: Vec<Vec<usize>>,
}

pub fn ball_graph(center: &Vertex, radius: u64) -> BallGraph {
    let vertices = ball(center, radius);
    let index: BTreeMap<&Vertex, usize> = vertices.iter().zip(0..).collect();
    let adj = vertices
        .iter()
        .map(|v| {
            neighbors(v)
                .iter()
                .filter_map(|n| index.get(n).copied())
                .collect()
        })
        .collect();
    BallGraph { vertices, adj }
}

impl BallGraph {
    /// Graph BFS distances from the i-th vertex (u32::MAX if unreachable).
    pub fn bfs_from(&self, i: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertices.len()];
        dist[i] = 0;
        let mut queue = VecDeque::from([i]);
        while let Some(v) = queue.pop_front() {
            for &n in &self.adj[v] {
                if dist[n] == u32::MAX {
                    dist[n] = dist[v] + 1;
                    queue.push_back(n);
                }
            }
        }
        dist
    }
}

// ---------------------------------------------------------------------------
// Minimum displacement scans
// ---------------------------------------------------------------------------

/// Oracle-side classification extracted from a ball scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleClass {
    Elliptic,
    Inversion,
    Hyperbolic { length: u64 },
}

/// Generic exact scan over ball(x_0, radius): minimum of d(x, gx) and the
/// vertices attaining it (at most 8 kept).
pub fn generic_min_displacement(g: &Mat2, radius: u64) -> (u64, Vec<Vertex>) {
    let mut min = u64::MAX;
    let mut argmin = Vec::new();
    for v in ball(&base_vertex(g.field()), radius) {
        let d = distance(&v, &act(g, &v));
        if d < min {
            min = d;
            argmin.clear();
        }
        if d == min && argmin.len() < 8 {
            argmin.push(v);
        }
    }
    (min, argmin)
}

/// Decides elliptic / inversion / hyperbolic from a scan result: elliptic at
/// displacement 0; at displacement 1 an inversion swaps the endpoints of an
/// edge while a translation does not; displacement >= 2 is a translation.
fn class_from_scan(g: &Mat2, min: u64, argmin: &[Vertex]) -> OracleClass {
    match min {
        0 => OracleClass::Elliptic,
        1 => {
            let v = &argmin[0];
            let w = act(g, v);
            if act(g, &w) == *v {
                OracleClass::Inversion
            } else {
                OracleClass::Hyperbolic { length: 1 }
            }
        }
        length => OracleClass::Hyperbolic { length },
    }
}

/// Generic-arithmetic oracle classification (works for both backends).
pub fn oracle_classify_generic(g: &Mat2, radius: u64) -> OracleClass {
    let (min, argmin) = generic_min_displacement(g, radius);
    class_from_scan(g, min, &argmin)
}

/// Fast oracle classification for Q_p inputs whose entries lie in Z[1/p].
pub fn oracle_classify_qp(g: &Mat2, radius: u64) -> OracleClass {
    let (min, argmin) = qp_min_displacement(g, radius);
    class_from_scan(g, min, &argmin)
}

/// Number n * p^e with n coprime to p (n = 0 encodes zero). Arithmetic is
/// checked; the scan's magnitudes are bounded well inside i128.
#[derive(Copy, Clone, Debug)]
struct PExp {
    n: i128,
    e: i64,
}

impl PExp {
    fn norm(mut self, p: i128) -> PExp {
        if self.n == 0 {
            self.e = 0;
            return self;
        }
        while self.n % p == 0 {
            self.n /= p;
            self.e += 1;
        }
        self
    }

    fn mul(self, rhs: PExp, _p: i128) -> PExp {
        if self.n == 0 || rhs.n == 0 {
            return PExp { n: 0, e: 0 };
        }
        PExp {
            n: self.n.checked_mul(rhs.n).expect("oracle mantissa overflow"),
            e: self.e + rhs.e,
        }
    }

    fn sub(self, rhs: PExp, p: i128) -> PExp {
        if self.n == 0 {
            return PExp { n: -rhs.n, e: rhs.e };
        }
        if rhs.n == 0 {
            return self;
        }
        let e = self.e.min(rhs.e);
        let pow = |k: i64| -> i128 {
            p.checked_pow(u32::try_from(k).expect("nonnegative shift"))
                .expect("oracle shift overflow")
        };
        let a = self.n.checked_mul(pow(self.e - e)).expect("oracle align overflow");
        let b = rhs.n.checked_mul(pow(rhs.e - e)).expect("oracle align overflow");
        PExp {
            n: a.checked_sub(b).expect("oracle sub overflow"),
            e,
        }
        .norm(p)
    }

    fn add(self, rhs: PExp, p: i128) -> PExp {
        self.sub(PExp { n: -rhs.n, e: rhs.e }, p)
    }

    fn val(self) -> Option<i64> {
        if self.n == 0 {
            None
        } else {
            Some(self.e)
        }
    }
}

fn scalar_to_pexp(s: &crate::field::Scalar, p: i128) -> PExp {
    let (n, denom_exp) = s
        .qp_parts()
        .expect("oracle inputs must be Q_p scalars in Z[1/p]");
    let n = i128::try_from(&n as &BigInt).expect("oracle inputs stay within i128");
    PExp {
        n,
        e: -(denom_exp as i64),
    }
    .norm(p)
}

struct QpScan {
    p: i128,
    a: PExp,
    b: PExp,
    c: PExp,
    d_minus_a: PExp,
    d: PExp,
    vdet: i64,
    min: u64,
    argmin: Vec<(i64, i128, u32)>,
}

impl QpScan {
    /// Displacement of g at the vertex (m, k/p^s) via the conjugated matrix
    /// [[A + Bc, B p^m],[(C + (D-A)c - Bc^2) / p^m, D - Bc]].
    fn displacement(&self, m: i64, k: i128, s: u32) -> u64 {
        let p = self.p;
        let c = PExp { n: k, e: -(s as i64) }.norm(p);
        let bc = self.b.mul(c, p);
        let e1 = self.a.add(bc, p);
        let e4 = self.d.sub(bc, p);
        let mid = self.d_minus_a.mul(c, p);
        let e3 = self.c.add(mid, p).sub(bc.mul(c, p), p);
        let mut a_min = i64::MAX;
        if let Some(v) = e1.val() {
            a_min = a_min.min(v);
        }
        if let Some(v) = self.b.val() {
            a_min = a_min.min(v + m);
        }
        if let Some(v) = e3.val() {
            a_min = a_min.min(v - m);
        }
        if let Some(v) = e4.val() {
            a_min = a_min.min(v);
        }
        debug_assert!(a_min != i64::MAX, "conjugate of an invertible matrix");
        (self.vdet - 2 * a_min) as u64
    }

    fn visit(&mut self, m: i64, k: i128, s: u32, depth_left: u64, skip_child: Option<i128>, allow_parent: bool) {
        let d = self.displacement(m, k, s);
        if d < self.min {
            self.min = d;
            self.argmin.clear();
        }
        if d == self.min && self.argmin.len() < 8 {
            self.argmin.push((m, k, s));
        }
        if depth_left == 0 {
            return;
        }
        let p = self.p;
        let pow = |e: i64| -> i128 {
            p.checked_pow(u32::try_from(e).expect("nonneg")).expect("pow overflow")
        };
        // children: (m+1, c + r * p^m)
        let s_child = s.max(u32::try_from((-m).max(0)).expect("small"));
        let base = k * pow((s_child - s) as i64);
        let step = pow(m + s_child as i64);
        for r in 0..p {
            let (kc, sc) = reduce(base + r * step, s_child, p);
            if skip_child == Some(encode(kc, sc)) {
                continue;
            }
            self.visit(m + 1, kc, sc, depth_left - 1, None, false);
        }
        if allow_parent {
            // parent: (m-1, c mod p^{m-1})
            let keep = m - 1 + s as i64;
            let (kp, sp) = if keep <= 0 {
                (0, 0)
            } else {
                reduce(k % pow(keep), s, p)
            };
            self.visit(m - 1, kp, sp, depth_left - 1, Some(encode(k, s)), true);
        }
    }
}

fn reduce(mut k: i128, mut s: u32, p: i128) -> (i128, u32) {
    if k == 0 {
        return (0, 0);
    }
    while s > 0 && k % p == 0 {
        k /= p;
        s -= 1;
    }
    (k, s)
}

/// Stable key for a canonical (k, s) pair so the parent can skip the child it
/// came from.
fn encode(k: i128, s: u32) -> i128 {
    // canonical pairs have k either 0 or coprime to p, so (k, s) is
    // determined by k * 2^32 + s within the scanned ranges
    k * (1i128 << 32) + s as i128
}

/// Fast scan over ball(x_0, radius) for Q_p matrices with entries in Z[1/p].
/// Returns the minimum displacement and up to 8 attaining vertices.
pub fn qp_min_displacement(g: &Mat2, radius: u64) -> (u64, Vec<Vertex>) {
    let field = g.field();
    assert_eq!(field.backend(), crate::field::Backend::Qp);
    let p = field.p() as i128;
    let a = scalar_to_pexp(g.a(), p);
    let b = scalar_to_pexp(g.b(), p);
    let c = scalar_to_pexp(g.c(), p);
    let d = scalar_to_pexp(g.d(), p);
    let vdet = g.det().valuation().finite().expect("invertible");
    let mut scan = QpScan {
        p,
        a,
        b,
        c,
        d_minus_a: d.sub(a, p),
        d,
        vdet,
        min: u64::MAX,
        argmin: Vec::new(),
    };
    scan.visit(0, 0, 0, radius, None, true);
    let argmin = scan
        .argmin
        .iter()
        .map(|&(m, k, s)| {
            let c = &field.from_bigint(BigInt::from(k)) * &field.uniformizer_pow(-(s as i64));
            Vertex::new(m, &c)
        })
        .collect();
    (scan.min, argmin)
}

// ---------------------------------------------------------------------------
// Graft search (exhaustive, level e = 1)
// ---------------------------------------------------------------------------

/// Outcome of the exhaustive comparison between the permutations of the
/// 1-ball leaves induced by the pointwise edge stabilizer and all
/// adjacency-preserving bijections fixing the edge.
#[derive(Debug, Clone)]
pub enum GraftOutcome {
    /// A bijection outside the induced group, packaged as a local
    /// automorphism on the 1-ball around the standard edge.
    Found(Box<LocalAut>),
    /// Every adjacency-preserving bijection is induced; no graft exists.
    FullInducedGroup,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let shorter = permutations(n - 1);
    let mut out = Vec::new();
    for perm in &shorter {
        for pos in 0..n {
            let mut next = perm.clone();
            next.insert(pos, n - 1);
            out.push(next);
        }
    }
    out.sort();
    out
}

/// Enumerates the pointwise stabilizer of {x_0, x_1} modulo pi^2 (entries as
/// digit lifts), records the induced pair of leaf permutations, then searches
/// all (q!)^2 candidate pairs for one not induced.
pub fn graft_search(field: Field) -> GraftOutcome {
    let p = field.p();
    let x0 = base_vertex(field);
    let x1 = standard_vertex(field, 1);
    let eta = Edge::new(x0.clone(), x1.clone()).expect("standard edge");

    let side0: Vec<Vertex> = neighbors(&x0).into_iter().filter(|v| *v != x1).collect();
    let side1: Vec<Vertex> = neighbors(&x1).into_iter().filter(|v| *v != x0).collect();
    let index0: BTreeMap<&Vertex, usize> = side0.iter().zip(0..).collect();
    let index1: BTreeMap<&Vertex, usize> = side1.iter().zip(0..).collect();

    let mut induced: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
    // Iwahori entries modulo pi^2: a, d unit digits, b integral, c in (pi)/(pi^2)
    for a0 in 1..p {
        for a1 in 0..p {
            for b0 in 0..p {
                for b1 in 0..p {
                    for c1 in 0..p {
                        for d0 in 1..p {
                            for d1 in 0..p {
                                let m = Mat2::new(
                                    field.from_digits(0, &[a0, a1]),
                                    field.from_digits(0, &[b0, b1]),
                                    field.from_digits(1, &[c1]),
                                    field.from_digits(0, &[d0, d1]),
                                )
                                .expect("unit diagonal");
                                let p0: Vec<usize> =
                                    side0.iter().map(|v| index0[&act(&m, v)]).collect();
                                let p1: Vec<usize> =
                                    side1.iter().map(|v| index1[&act(&m, v)]).collect();
                                induced.insert((p0, p1));
                            }
                        }
                    }
                }
            }
        }
    }

    let perms = permutations(p as usize);
    for p0 in &perms {
        for p1 in &perms {
            if induced.contains(&(p0.clone(), p1.clone())) {
                continue;
            }
            // build the grafted bijection on B(eta, 1)
            let mut pairs = vec![(x0.clone(), x0.clone()), (x1.clone(), x1.clone())];
            for (i, v) in side0.iter().enumerate() {
                pairs.push((v.clone(), side0[p0[i]].clone()));
            }
            for (i, v) in side1.iter().enumerate() {
                pairs.push((v.clone(), side1[p1[i]].clone()));
            }
            let la = LocalAut::new(BallCenter::Edge(eta), 1, pairs)
                .expect("leaf permutations preserve the star structure");
            return GraftOutcome::Found(Box::new(la));
        }
    }
    GraftOutcome::FullInducedGroup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::sample::{rand_mat2, SuiteRng};
    use rand::SeedableRng;

    #[test]
    fn fast_scan_matches_generic_scan() {
        let f = Field::qp(3).unwrap();
        let mut rng = SuiteRng::seed_from_u64(7);
        for _ in 0..40 {
            let g = rand_mat2(&mut rng, f, -4, 4);
            let (fast_min, fast_arg) = qp_min_displacement(&g, 3);
            let (gen_min, _) = generic_min_displacement(&g, 3);
            assert_eq!(fast_min, gen_min, "matrix {g}");
            for v in &fast_arg {
                assert_eq!(distance(v, &act(&g, v)), fast_min);
            }
        }
    }

    #[test]
    fn scan_examples() {
        let f = Field::qp(2).unwrap();
        let tau = Mat2::diagonal(f.one(), f.uniformizer()).unwrap();
        assert_eq!(oracle_classify_qp(&tau, 4), OracleClass::Hyperbolic { length: 1 });
        let s = Mat2::swap(f);
        assert_eq!(oracle_classify_qp(&s, 4), OracleClass::Elliptic);
        let inv = f.parse_mat2("0,1;2,0").unwrap();
        assert_eq!(oracle_classify_qp(&inv, 4), OracleClass::Inversion);
    }

    #[test]
    fn bfs_graph_distances() {
        let f = Field::qp(2).unwrap();
        let graph = ball_graph(&base_vertex(f), 3);
        let d0 = graph.bfs_from(0);
        for (i, v) in graph.vertices.iter().enumerate() {
            assert_eq!(d0[i] as u64, distance(&graph.vertices[0], v));
        }
    }

    #[test]
    fn graft_small_prime() {
        // p = 2: the induced group covers all (2!)^2 leaf permutation pairs
        let f = Field::qp(2).unwrap();
        assert!(matches!(graft_search(f), GraftOutcome::FullInducedGroup));
    }
}
