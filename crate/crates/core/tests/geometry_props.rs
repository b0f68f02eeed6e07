//! Geometry invariants beyond the per-module unit tests: classification
//! against the generic scan on the Laurent backend, witness verification at
//! random, coset uniqueness for the reflected Bruhat part, and the local
//! agreement machinery on both backends.

use btk_core::field::Field;
use btk_core::geometry::{
    bruhat_geo, classify, edge_end_orientation, elliptic_fixed_index, fixes_standard_apartment,
    geo_member, ghat_local_test, iwahori_geo, pgl2_match_on_ball, AutClass, BallCenter,
    GeoDecomposition, GeoGroup, GhatVerdict, LocalAut,
};
use btk_core::gl2::Mat2;
use btk_core::tree::{
    act, base_vertex, distance, edge_ball, standard_vertex, stabilizes_end, Edge, End,
};
use btk_core::verify::oracle::{generic_min_displacement, oracle_classify_generic, OracleClass};
use btk_core::verify::sample::{rand_end, rand_mat2, rand_upper, SuiteRng};
use rand::SeedableRng;

#[test]
fn classify_matches_generic_oracle_laurent() {
    let field = Field::laurent(2).unwrap();
    let mut rng = SuiteRng::seed_from_u64(61);
    for _ in 0..60 {
        let g = rand_mat2(&mut rng, field, -3, 3);
        let lib = classify(&g).unwrap();
        let orc = oracle_classify_generic(&g, 7);
        match (&lib, &orc) {
            (AutClass::Elliptic { fixed }, OracleClass::Elliptic) => {
                assert_eq!(act(&g, fixed), *fixed);
            }
            (AutClass::Inversion { edge }, OracleClass::Inversion) => {
                let (u, v) = edge.endpoints();
                assert_eq!(act(&g, u), *v);
                assert_eq!(act(&g, v), *u);
            }
            (AutClass::Hyperbolic { length, .. }, OracleClass::Hyperbolic { length: l }) => {
                assert_eq!(length, l);
            }
            other => panic!("classification mismatch: {other:?} for {g}"),
        }
    }
}

#[test]
fn hyperbolic_axis_translates() {
    let field = Field::qp(3).unwrap();
    let mut rng = SuiteRng::seed_from_u64(67);
    let mut seen = 0;
    while seen < 40 {
        let g = rand_mat2(&mut rng, field, -4, 4);
        if let AutClass::Hyperbolic { length, axis_window } = classify(&g).unwrap() {
            seen += 1;
            for v in axis_window.vertices() {
                assert_eq!(distance(v, &act(&g, v)), length, "axis displacement");
            }
            // the whole tree displaces by at least the translation length
            let (min, _) = generic_min_displacement(&g, 4);
            assert_eq!(min, length);
        }
    }
}

#[test]
fn edge_end_alternative_is_exclusive() {
    let field = Field::qp(3).unwrap();
    let mut rng = SuiteRng::seed_from_u64(71);
    let x0 = base_vertex(field);
    let x1 = standard_vertex(field, 1);
    let e = Edge::new(x0, x1).unwrap();
    for _ in 0..200 {
        let sigma = rand_end(&mut rng, field);
        // on_halfline returns the endpoint closer to the end
        let closer = edge_end_orientation(&e, &sigma).on_halfline(&e).clone();
        let other = e.other(&closer).clone();
        let h = btk_core::tree::halfline(&other, &sigma, 1);
        assert_eq!(h.vertices()[1], closer, "closer endpoint is on the other's halfline");
    }
}

#[test]
fn bruhat_geo_coset_uniqueness_via_independent_route() {
    use btk_core::geometry::end_pair_witness;
    use btk_core::tree::crossroad;
    let field = Field::qp(2).unwrap();
    let omega = End::omega(field);
    let omega_p = End::omega_prime(field);
    let mut rng = SuiteRng::seed_from_u64(73);
    let mut done = 0;
    while done < 60 {
        let g = rand_mat2(&mut rng, field, -4, 4);
        if stabilizes_end(&g, &omega) {
            continue;
        }
        done += 1;
        let n1 = match bruhat_geo(&g) {
            GeoDecomposition::BruhatReflected { n_part, .. } => n_part,
            _ => unreachable!(),
        };
        let sigma = omega.apply(&g);
        let n2 = if sigma == omega_p {
            Mat2::identity(field)
        } else {
            let xk = crossroad(&omega, &omega_p, &sigma).unwrap();
            end_pair_witness(&xk, &omega, &omega_p, &xk, &omega, &sigma).unwrap()
        };
        assert!(geo_member(&n2, GeoGroup::EllipticEndStabilizer));
        assert!(
            fixes_standard_apartment(&n1.inv().mul(&n2), 4),
            "reflected parts agree modulo the apartment stabilizer for {g}"
        );
    }
}

#[test]
fn elliptic_end_stabilizer_fixes_witnessed_vertex() {
    let field = Field::laurent(3).unwrap();
    let mut rng = SuiteRng::seed_from_u64(79);
    let mut done = 0;
    while done < 60 {
        let b = rand_upper(&mut rng, field, -3, 3);
        if !geo_member(&b, GeoGroup::EllipticEndStabilizer) {
            continue;
        }
        done += 1;
        let i = elliptic_fixed_index(&b).expect("member has a fixed vertex");
        let xi = standard_vertex(field, i);
        assert_eq!(act(&b, &xi), xi);
    }
}

#[test]
fn iwahori_factors_meet_in_apartment_stabilizer() {
    // elements in both factor groups (stabilizing either end and fixing the
    // edge) fix the whole standard apartment
    let field = Field::qp(3).unwrap();
    let mut rng = SuiteRng::seed_from_u64(83);
    for _ in 0..200 {
        let g = rand_mat2(&mut rng, field, -4, 4);
        let in_i = geo_member(&g, GeoGroup::EdgePointwiseStabilizer);
        let in_both_ends = geo_member(&g, GeoGroup::EndStabilizer)
            && geo_member(&g, GeoGroup::OppositeEndStabilizer);
        if in_i && in_both_ends {
            assert!(fixes_standard_apartment(&g, 4));
        }
    }
    // and concretely through the factorization
    let mut done = 0;
    while done < 40 {
        let g = rand_mat2(&mut rng, field, -2, 2);
        if !geo_member(&g, GeoGroup::EdgePointwiseStabilizer) {
            continue;
        }
        done += 1;
        let d = iwahori_geo(&g).unwrap();
        assert!(d.verify(&g));
    }
}

#[test]
fn pgl2_match_recovers_matrix_action_laurent() {
    let field = Field::laurent(2).unwrap();
    let mut rng = SuiteRng::seed_from_u64(89);
    let x0 = base_vertex(field);
    let x1 = standard_vertex(field, 1);
    let eta = Edge::new(x0.clone(), x1).unwrap();
    for _ in 0..10 {
        let g = rand_mat2(&mut rng, field, -2, 2);
        let la = LocalAut::restriction(&g, BallCenter::Vertex(x0.clone()), 2);
        let found = pgl2_match_on_ball(&la, &eta, 1)
            .unwrap()
            .expect("restrictions always match");
        for w in edge_ball(&eta, 1) {
            assert_eq!(act(&found, &w), act(&g, &w), "agreement on the edge ball");
        }
    }
}

#[test]
fn cartan_geo_index_is_bi_invariant() {
    use btk_core::geometry::cartan_geo;
    use btk_core::verify::sample::rand_k;
    let field = Field::qp(3).unwrap();
    let mut rng = SuiteRng::seed_from_u64(97);
    let power_of = |g: &Mat2| match cartan_geo(g).unwrap() {
        GeoDecomposition::Cartan { power, .. } => power,
        _ => unreachable!(),
    };
    for _ in 0..100 {
        let g = rand_mat2(&mut rng, field, -4, 4);
        let k1 = rand_k(&mut rng, field);
        let k2 = rand_k(&mut rng, field);
        assert!(geo_member(&k1, GeoGroup::StabilizerX0));
        assert_eq!(power_of(&k1.mul(&g).mul(&k2)), power_of(&g), "index not bi-invariant for {g}");
    }
}

#[test]
fn grafted_map_is_flagged() {
    use btk_core::verify::oracle::{graft_search, GraftOutcome};
    // p = 5 admits a non-induced leaf permutation; the local test rejects it
    let field = Field::qp(5).unwrap();
    match graft_search(field) {
        GraftOutcome::Found(la) => {
            match ghat_local_test(&la, 1).unwrap() {
                GhatVerdict::Violation { .. } => {}
                v => panic!("graft should be rejected, got {v:?}"),
            }
        }
        GraftOutcome::FullInducedGroup => {
            panic!("p = 5 leaf permutations exceed the induced group");
        }
    }
}
