mod common;

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steiner_core::steiner::DEFAULT_TOL;
use steiner_core::{mst, smt_plane, smt_quotient, CoveringMap, Disphenoid, Space, SurfacePoint, Vec2};

fn polar_lift(r: f64, phi: f64) -> Vec2 {
    Vec2::new(r * phi.cos(), r * phi.sin())
}

fn cone_terminals(k: u32, n: usize, rng: &mut ChaCha8Rng) -> Vec<SurfacePoint> {
    let theta = TAU / f64::from(k);
    (0..n).map(|_| SurfacePoint::polar(rng.gen_range(0.2..3.0), rng.gen_range(0.0..theta))).collect()
}

fn face_terminals(n: usize, rng: &mut ChaCha8Rng) -> Vec<SurfacePoint> {
    (0..n)
        .map(|_| {
            let (u, v): (f64, f64) = (rng.gen(), rng.gen());
            let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
            SurfacePoint::on_face(rng.gen_range(0..4), [1.0 - u - v, u, v])
        })
        .collect()
}

/// Shortest plane Steiner tree over every rotation of every terminal but the first.
fn cone_oracle(k: u32, terminals: &[SurfacePoint]) -> f64 {
    let polar: Vec<(f64, f64)> = terminals
        .iter()
        .map(|p| match *p {
            SurfacePoint::Cone { r, phi } => (r, phi),
            _ => unreachable!(),
        })
        .collect();
    let n = polar.len();
    let mut best = f64::INFINITY;
    for code in 0..(k as usize).pow(n as u32 - 1) {
        let mut rest = code;
        let lifted: Vec<Vec2> = polar
            .iter()
            .enumerate()
            .map(|(i, &(r, phi))| {
                let sheet = if i == 0 { 0 } else { rest % k as usize };
                if i > 0 {
                    rest /= k as usize;
                }
                polar_lift(r, phi + TAU * sheet as f64 / f64::from(k))
            })
            .collect();
        best = best.min(smt_plane(&lifted, DEFAULT_TOL).unwrap().total_length);
    }
    best
}

#[test]
fn cone_matches_exhaustive_sheet_assignment() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for k in 1..=4u32 {
        let space = Space::cone_sheets(k).unwrap();
        for n in 2..=4 {
            for _ in 0..4 {
                let t = cone_terminals(k, n, &mut rng);
                let got = smt_quotient(&space, &t, DEFAULT_TOL).unwrap();
                let oracle = cone_oracle(k, &t);
                assert!((got.length() - oracle).abs() < 1e-9, "k={k} n={n}: {} vs {oracle}", got.length());
            }
        }
    }
}

#[test]
fn disphenoid_matches_unfolded_assignments() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for d in [Disphenoid::regular(1.0).unwrap(), Disphenoid::new(1.0, 1.2, 1.3).unwrap()] {
        let space = Space::Disphenoid(d);
        for _ in 0..5 {
            let t = face_terminals(3, &mut rng);
            let got = smt_quotient(&space, &t, DEFAULT_TOL).unwrap();
            let bound = mst(&space, &t).unwrap().total_length;
            let anchor = common::tiling_lifts(&d, &t[0], 3.0)[0];
            let radius = anchor.norm() + bound + 1e-6;
            let choices: Vec<Vec<Vec2>> = t[1..]
                .iter()
                .map(|x| common::tiling_lifts(&d, x, radius).into_iter().filter(|p| (p - anchor).norm() <= bound + 1e-6).collect())
                .collect();
            let mut oracle = f64::INFINITY;
            for p1 in &choices[0] {
                for p2 in &choices[1] {
                    let len = smt_plane(&[anchor, *p1, *p2], DEFAULT_TOL).unwrap().total_length;
                    assert!(got.length() <= len + 1e-9);
                    oracle = oracle.min(len);
                }
            }
            assert!((got.length() - oracle).abs() < 1e-9, "{} vs {oracle}", got.length());
        }
    }
}

#[test]
fn projected_tree_keeps_its_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let cases: Vec<(CoveringMap, Vec<SurfacePoint>)> = (0..10)
        .map(|i| {
            if i % 2 == 0 {
                (CoveringMap::cone(3).unwrap(), cone_terminals(3, 4, &mut rng))
            } else {
                (CoveringMap::disphenoid(Disphenoid::regular(1.0).unwrap()), face_terminals(4, &mut rng))
            }
        })
        .collect();
    for (cover, t) in cases {
        let base = cover.base();
        let smt = smt_quotient(&base, &t, DEFAULT_TOL).unwrap();
        assert!((smt.tree.total_length - smt.plane_tree.total_length).abs() < 1e-12);
        assert!(smt.tree.is_spanning_tree());
        for (&(a, b), len) in smt.tree.edges.iter().zip(&smt.tree.edge_lengths) {
            let pa = smt.plane_tree.vertices[a].point.as_plane().unwrap();
            let pb = smt.plane_tree.vertices[b].point.as_plane().unwrap();
            assert!((cover.projected_length(pa, pb) - len).abs() < 1e-12);
            let chord = base.distance(smt.tree.vertices[a].point, smt.tree.vertices[b].point).unwrap();
            assert!(chord <= len + 1e-9);
        }
        for (i, lifted) in smt.lifted_points().iter().enumerate() {
            assert!(base.distance(cover.project(*lifted), t[i]).unwrap() < 1e-9);
        }
        let m = mst(&base, &t).unwrap().total_length;
        assert!(smt.length() <= m + 1e-9 && smt.length() >= m / 2.0 - 1e-9);
    }
}

#[test]
fn full_turn_cone_is_the_plane() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let space = Space::cone_sheets(1).unwrap();
    for n in 2..=5 {
        let t = cone_terminals(1, n, &mut rng);
        let plane: Vec<Vec2> = t
            .iter()
            .map(|p| match *p {
                SurfacePoint::Cone { r, phi } => polar_lift(r, phi),
                _ => unreachable!(),
            })
            .collect();
        let a = smt_quotient(&space, &t, DEFAULT_TOL).unwrap().length();
        let b = smt_plane(&plane, DEFAULT_TOL).unwrap().total_length;
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn forcing_the_apex_never_helps() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for k in 2..=4u32 {
        let space = Space::cone_sheets(k).unwrap();
        for _ in 0..8 {
            let t = cone_terminals(k, 3, &mut rng);
            let free = smt_quotient(&space, &t, DEFAULT_TOL).unwrap().length();
            let mut forced = t.clone();
            forced.push(SurfacePoint::polar(0.0, 0.0));
            let through = smt_quotient(&space, &forced, DEFAULT_TOL).unwrap().length();
            assert!(through >= free - 1e-9, "k={k}: {through} < {free}");
        }
    }
}

#[test]
fn lifting_never_raises_the_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    for k in [2u32, 3, 5] {
        let space = Space::cone_sheets(k).unwrap();
        for _ in 0..10 {
            let t = cone_terminals(k, 3, &mut rng);
            let smt = smt_quotient(&space, &t, DEFAULT_TOL).unwrap();
            let sr_base = smt.length() / mst(&space, &t).unwrap().total_length;
            let lifted: Vec<SurfacePoint> = smt.lifted_points().iter().map(|p| SurfacePoint::from_vec(*p)).collect();
            let sr_lift = smt.plane_tree.total_length / mst(&Space::Plane, &lifted).unwrap().total_length;
            assert!(sr_base >= sr_lift - 1e-9);
        }
    }
}

#[test]
fn worked_examples() {
    let k2 = Space::cone_sheets(2).unwrap();
    let pair = [SurfacePoint::polar(1.0, 0.0), SurfacePoint::polar(1.0, PI / 2.0)];
    assert!((smt_quotient(&k2, &pair, DEFAULT_TOL).unwrap().length() - 2f64.sqrt()).abs() < 1e-12);

    let d = Disphenoid::regular(1.0).unwrap();
    let face: Vec<_> = (0..3).map(|i| d.vertex_point(i)).collect();
    let tet = smt_quotient(&Space::Disphenoid(d), &face, DEFAULT_TOL).unwrap();
    let unfolded = smt_plane(&[Vec2::zeros(), d.vertex_b(), d.vertex_c()], DEFAULT_TOL).unwrap();
    assert!((tet.length() - 3f64.sqrt()).abs() < 1e-9);
    assert!((tet.length() - unfolded.total_length).abs() < 1e-9);
}
