//! Tree-level invariants: metric axioms on finite balls, BFS agreement,
//! isometry of the action, stabilizer facts, and sphere growth.

use btk_core::field::Field;
use btk_core::gl2::{member, proj_normalize, SubgroupTag};
use btk_core::tree::{
    act, ball, base_vertex, distance, geodesic, halfline, neighbors, sphere, stabilizes_end,
    standard_vertex, End,
};
use btk_core::verify::oracle::ball_graph;
use btk_core::verify::sample::{rand_end, rand_mat2, rand_vertex, SuiteRng};
use rand::SeedableRng;

#[test]
fn metric_axioms_on_small_balls() {
    for p in [2u64, 3] {
        for field in [Field::qp(p).unwrap(), Field::laurent(p).unwrap()] {
            let verts = ball(&base_vertex(field), 4);
            let n = verts.len();
            for i in 0..n {
                assert_eq!(distance(&verts[i], &verts[i]), 0);
                for j in (i + 1)..n {
                    let d = distance(&verts[i], &verts[j]);
                    assert!(d > 0, "distinct vertices at distance 0");
                    assert_eq!(d, distance(&verts[j], &verts[i]), "symmetry");
                }
            }
            // triangle inequality on a sample of triples
            let step = (n / 12).max(1);
            for i in (0..n).step_by(step) {
                for j in (0..n).step_by(step) {
                    for k in (0..n).step_by(step) {
                        let dij = distance(&verts[i], &verts[j]);
                        let djk = distance(&verts[j], &verts[k]);
                        let dik = distance(&verts[i], &verts[k]);
                        assert!(dik <= dij + djk, "triangle inequality");
                    }
                }
            }
        }
    }
}

#[test]
fn distance_agrees_with_bfs_small() {
    for p in [2u64, 3] {
        let field = Field::laurent(p).unwrap();
        let graph = ball_graph(&base_vertex(field), 3);
        for i in 0..graph.vertices.len() {
            let bfs = graph.bfs_from(i);
            for (j, v) in graph.vertices.iter().enumerate() {
                assert_eq!(distance(&graph.vertices[i], v), bfs[j] as u64);
            }
        }
    }
}

#[test]
fn action_is_isometric() {
    for field in [Field::qp(3).unwrap(), Field::laurent(2).unwrap()] {
        let mut rng = SuiteRng::seed_from_u64(11);
        for _ in 0..500 {
            let g = rand_mat2(&mut rng, field, -4, 4);
            let x = rand_vertex(&mut rng, field);
            let y = rand_vertex(&mut rng, field);
            assert_eq!(distance(&act(&g, &x), &act(&g, &y)), distance(&x, &y));
        }
    }
}

#[test]
fn stabilizer_facts() {
    for field in [Field::qp(2).unwrap(), Field::qp(3).unwrap(), Field::laurent(3).unwrap()] {
        let mut rng = SuiteRng::seed_from_u64(23);
        let x0 = base_vertex(field);
        let x1 = standard_vertex(field, 1);
        let omega = End::omega(field);
        for _ in 0..500 {
            let g = rand_mat2(&mut rng, field, -5, 5);
            let rep = proj_normalize(&g);
            assert_eq!(
                act(&g, &x0) == x0,
                member(rep.rep(), SubgroupTag::K),
                "vertex stabilizer vs K membership for {g}"
            );
            assert_eq!(
                act(&g, &x0) == x0 && act(&g, &x1) == x1,
                member(rep.rep(), SubgroupTag::I),
                "edge stabilizer vs Iwahori membership for {g}"
            );
            assert_eq!(
                stabilizes_end(&g, &omega),
                rep.rep().c().is_zero(),
                "end stabilizer vs upper-triangular for {g}"
            );
        }
    }
}

#[test]
fn sphere_growth_all_backends() {
    for p in [2u64, 3, 5] {
        for field in [Field::qp(p).unwrap(), Field::laurent(p).unwrap()] {
            let x0 = base_vertex(field);
            for r in 1..=3u64 {
                assert_eq!(
                    sphere(&x0, r).len() as u64,
                    (p + 1) * p.pow(r as u32 - 1),
                    "p={p} r={r}"
                );
            }
        }
    }
}

#[test]
fn geodesics_through_random_pairs() {
    let field = Field::qp(3).unwrap();
    let mut rng = SuiteRng::seed_from_u64(37);
    for _ in 0..300 {
        let x = rand_vertex(&mut rng, field);
        let y = rand_vertex(&mut rng, field);
        let path = geodesic(&x, &y);
        assert_eq!(path.first(), &x);
        assert_eq!(path.last(), &y);
        assert_eq!(path.len_edges(), distance(&x, &y));
        // every interior vertex lies strictly between the endpoints
        for v in path.vertices() {
            assert_eq!(distance(&x, v) + distance(v, &y), distance(&x, &y));
        }
    }
}

#[test]
fn halflines_nest_and_merge() {
    let field = Field::laurent(3).unwrap();
    let mut rng = SuiteRng::seed_from_u64(41);
    for _ in 0..60 {
        let x = rand_vertex(&mut rng, field);
        let omega = rand_end(&mut rng, field);
        let h8 = halfline(&x, &omega, 8);
        let h4 = halfline(&x, &omega, 4);
        assert_eq!(&h8.vertices()[..5], h4.vertices(), "prefix nesting");
        // stepping from any vertex of the halfline continues along it
        for w in h8.vertices().windows(2) {
            assert_eq!(distance(&w[0], &w[1]), 1);
        }
        // a halfline from a neighbor merges within a couple of steps
        let y = neighbors(&x).pop().unwrap();
        let hy = halfline(&y, &omega, 9);
        let tail = &h8.vertices()[2..];
        assert!(
            tail.iter().all(|v| hy.vertices().contains(v)),
            "halflines toward the same end merge"
        );
    }
}

#[test]
fn end_stabilizer_preserves_halfline_targets() {
    let field = Field::qp(5).unwrap();
    let mut rng = SuiteRng::seed_from_u64(53);
    for _ in 0..100 {
        let g = rand_mat2(&mut rng, field, -3, 3);
        let omega = rand_end(&mut rng, field);
        if !stabilizes_end(&g, &omega) {
            continue;
        }
        // the image halfline toward the same end merges with the original
        let x = rand_vertex(&mut rng, field);
        let gx = act(&g, &x);
        let h1 = halfline(&gx, &omega.apply(&g), 6);
        let h2 = halfline(&gx, &omega, 6);
        assert_eq!(h1, h2, "stabilized end gives the same halfline");
    }
}
