//! Independent reference computations for the integration tests.
//!
//! None of these share code paths with the library beyond the public data types.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use steiner_core::{Disphenoid, SurfacePoint, Vec2};

pub type P3 = [f64; 3];

fn dist3(a: P3, b: P3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn lerp3(a: P3, b: P3, t: f64) -> P3 {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])]
}

// ---------------------------------------------------------------- tetrahedron in space

/// Vertices of the tetrahedron with opposite edges `a`, `b`, `c` inscribed in a box:
/// `|V1V2| = a`, `|V0V2| = b`, `|V0V1| = c`.
pub fn tetra_vertices(d: &Disphenoid) -> [P3; 4] {
    let [a, b, c] = d.sides();
    let p = ((a * a + b * b - c * c) / 8.0).sqrt();
    let q = ((a * a + c * c - b * b) / 8.0).sqrt();
    let r = ((b * b + c * c - a * a) / 8.0).sqrt();
    [[p, q, r], [p, -q, -r], [-p, q, -r], [-p, -q, r]]
}

pub fn to_3d(d: &Disphenoid, x: &SurfacePoint) -> P3 {
    let v = tetra_vertices(d);
    match *x {
        SurfacePoint::Disphenoid { face, bary } => {
            let labels = Disphenoid::FACE_VERTICES[face as usize];
            let mut out = [0.0; 3];
            for (w, l) in bary.iter().zip(labels) {
                for k in 0..3 {
                    out[k] += w * v[l][k];
                }
            }
            out
        }
        _ => panic!("not a disphenoid point"),
    }
}

/// Geodesic distance approximated by Dijkstra over straight segments inside faces between
/// `per_edge` evenly spaced points on each edge. Every graph path is a surface path, so
/// the result approaches the true distance from above.
pub fn mesh_distance(d: &Disphenoid, x: &SurfacePoint, y: &SurfacePoint, per_edge: usize) -> f64 {
    let v = tetra_vertices(d);
    let mut graph: UnGraph<P3, f64> = UnGraph::new_undirected();
    let vertex_nodes: Vec<NodeIndex> = v.iter().map(|p| graph.add_node(*p)).collect();
    let mut edge_nodes: HashMap<(usize, usize), Vec<NodeIndex>> = HashMap::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let nodes = (1..=per_edge)
                .map(|k| graph.add_node(lerp3(v[i], v[j], k as f64 / (per_edge + 1) as f64)))
                .collect();
            edge_nodes.insert((i, j), nodes);
        }
    }
    let queries = [(x, graph.add_node(to_3d(d, x))), (y, graph.add_node(to_3d(d, y)))];
    for face in 0..4u8 {
        let labels = Disphenoid::FACE_VERTICES[face as usize];
        let mut nodes: Vec<NodeIndex> = labels.iter().map(|&l| vertex_nodes[l]).collect();
        for (i, &a) in labels.iter().enumerate() {
            let b = labels[(i + 1) % 3];
            nodes.extend(&edge_nodes[&(a.min(b), a.max(b))]);
        }
        for (q, node) in queries {
            if matches!(q, SurfacePoint::Disphenoid { face: f, .. } if *f == face) {
                nodes.push(node);
            }
        }
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                let w = dist3(graph[a], graph[b]);
                graph.add_edge(a, b, w);
            }
        }
    }
    let costs = dijkstra(&graph, queries[0].1, Some(queries[1].1), |e| *e.weight());
    costs[&queries[1].1]
}

/// Doubles the edge subdivision until two successive doublings each change the mesh
/// distance by less than `rel`; coarse meshes can plateau for one step.
pub fn mesh_distance_converged(d: &Disphenoid, x: &SurfacePoint, y: &SurfacePoint, rel: f64) -> f64 {
    let mut m = 4;
    let mut prev = mesh_distance(d, x, y, m);
    let mut calm = 0;
    loop {
        m *= 2;
        let next = mesh_distance(d, x, y, m);
        calm = if (prev - next).abs() <= rel * next { calm + 1 } else { 0 };
        if calm == 2 || m >= 512 {
            return next;
        }
        prev = next;
    }
}

// ---------------------------------------------------------------- unfolded tiling

/// A face unfolded into the plane, with the tetrahedron vertex at each corner.
#[derive(Debug, Clone)]
pub struct Tile {
    pub face: usize,
    pub labels: [usize; 3],
    pub corners: [Vec2; 3],
}

impl Tile {
    fn centroid(&self) -> Vec2 {
        (self.corners[0] + self.corners[1] + self.corners[2]) / 3.0
    }

    fn bary(&self, p: Vec2) -> [f64; 3] {
        let [a, b, c] = self.corners;
        let (e1, e2, dp) = (b - a, c - a, p - a);
        let det = e1.x * e2.y - e1.y * e2.x;
        let v = (dp.x * e2.y - dp.y * e2.x) / det;
        let w = (e1.x * dp.y - e1.y * dp.x) / det;
        [1.0 - v - w, v, w]
    }

    /// Plane position of a surface point lying on this tile's face.
    pub fn place(&self, bary: [f64; 3]) -> Vec2 {
        let labels = Disphenoid::FACE_VERTICES[self.face];
        let mut out = Vec2::zeros();
        for (w, l) in bary.iter().zip(labels) {
            let k = self.labels.iter().position(|&m| m == l).unwrap();
            out += self.corners[k] * *w;
        }
        out
    }
}

/// Breadth-first unfolding of the faces across their edges, starting from face 0 at the
/// origin, keeping tiles whose centroid lies within `radius`.
pub fn tiles_within(d: &Disphenoid, radius: f64) -> Vec<Tile> {
    let start = Tile {
        face: 0,
        labels: Disphenoid::FACE_VERTICES[0],
        corners: [Vec2::zeros(), d.vertex_b(), d.vertex_c()],
    };
    let key = |t: &Tile| {
        let c = t.centroid();
        ((c.x * 1e6).round() as i64, (c.y * 1e6).round() as i64)
    };
    let mut seen = HashSet::from([key(&start)]);
    let mut queue = std::collections::VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(tile) = queue.pop_front() {
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let (u, v, w) = (tile.labels[i], tile.labels[j], tile.labels[k]);
            let face = (0..4)
                .find(|&f| f != tile.face && Disphenoid::FACE_VERTICES[f].contains(&u) && Disphenoid::FACE_VERTICES[f].contains(&v))
                .unwrap();
            let other = Disphenoid::FACE_VERTICES[face].into_iter().find(|&l| l != u && l != v).unwrap();
            assert_ne!(other, w);
            let next = Tile {
                face,
                labels: [u, v, other],
                corners: [tile.corners[i], tile.corners[j], tile.corners[i] + tile.corners[j] - tile.corners[k]],
            };
            if next.centroid().norm() <= radius && seen.insert(key(&next)) {
                queue.push_back(next);
            }
        }
        out.push(tile);
    }
    out
}

/// All plane positions of a surface point within `radius` of the origin.
pub fn tiling_lifts(d: &Disphenoid, x: &SurfacePoint, radius: f64) -> Vec<Vec2> {
    let SurfacePoint::Disphenoid { face, bary } = *x else { panic!("not a disphenoid point") };
    let reach = radius + d.sides().iter().sum::<f64>();
    let mut out: Vec<Vec2> = Vec::new();
    for tile in tiles_within(d, reach).iter().filter(|t| t.face == face as usize) {
        let p = tile.place(bary);
        if p.norm() <= radius && out.iter().all(|q| (q - p).norm() > 1e-9) {
            out.push(p);
        }
    }
    out
}

/// Surface point under a plane point, as a point in space.
pub fn tiling_project_3d(d: &Disphenoid, p: Vec2) -> P3 {
    let v = tetra_vertices(d);
    let tiles = tiles_within(d, p.norm() + 2.0 * d.sides().iter().sum::<f64>());
    let tile = tiles
        .iter()
        .find(|t| t.bary(p).iter().all(|w| *w >= -1e-9))
        .expect("point covered by the tiling");
    let bary = tile.bary(p);
    let mut out = [0.0; 3];
    for (w, l) in bary.iter().zip(tile.labels) {
        for k in 0..3 {
            out[k] += w * v[l][k];
        }
    }
    out
}

pub fn dist_3d(a: P3, b: P3) -> f64 {
    dist3(a, b)
}

// ---------------------------------------------------------------- cones

/// Distance on the cone of total angle `theta` by Dijkstra through a fan of `sectors` flat
/// wedges, with `rings` nodes per ray up to `r_max`. Approaches the true value from above.
pub fn cone_mesh_distance(theta: f64, a: (f64, f64), b: (f64, f64), sectors: usize, rings: usize, r_max: f64) -> f64 {
    let width = theta / sectors as f64;
    assert!(width < std::f64::consts::PI);
    // nodes as (radius, angle); the apex has angle 0
    let mut graph: UnGraph<(f64, f64), f64> = UnGraph::new_undirected();
    let apex = graph.add_node((0.0, 0.0));
    let rays: Vec<Vec<NodeIndex>> = (0..sectors)
        .map(|j| (1..=rings).map(|i| graph.add_node((r_max * i as f64 / rings as f64, j as f64 * width))).collect())
        .collect();
    let qa = graph.add_node(a);
    let qb = graph.add_node(b);
    for j in 0..sectors {
        let lo = j as f64 * width;
        let (c, s) = (width.cos(), width.sin());
        // positions in the wedge unfolded with its opening ray along the x axis
        let mut nodes: Vec<(NodeIndex, Vec2)> = vec![(apex, Vec2::zeros())];
        nodes.extend(rays[j].iter().map(|&n| (n, Vec2::new(graph[n].0, 0.0))));
        nodes.extend(rays[(j + 1) % sectors].iter().map(|&n| (n, Vec2::new(graph[n].0 * c, graph[n].0 * s))));
        for (node, (r, phi)) in [(qa, a), (qb, b)] {
            if phi >= lo && phi <= lo + width {
                let t = phi - lo;
                nodes.push((node, Vec2::new(r * t.cos(), r * t.sin())));
            }
        }
        for (i, &(m, pm)) in nodes.iter().enumerate() {
            for &(n, pn) in &nodes[i + 1..] {
                graph.add_edge(m, n, (pm - pn).norm());
            }
        }
    }
    let costs = dijkstra(&graph, qa, Some(qb), |e| *e.weight());
    costs[&qb]
}

/// Distance on the cone `2π/k`, which is the plane modulo rotation by `2π/k`, as the
/// smallest plane distance between lifts.
pub fn cone_lift_distance(k: u32, a: (f64, f64), b: (f64, f64)) -> f64 {
    let pa = Vec2::new(a.0 * a.1.cos(), a.0 * a.1.sin());
    (0..k)
        .map(|i| {
            let psi = b.1 + std::f64::consts::TAU * f64::from(i) / f64::from(k);
            (pa - Vec2::new(b.0 * psi.cos(), b.0 * psi.sin())).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

// ---------------------------------------------------------------- spanning trees

/// Labelled tree from a Prüfer sequence on `n` vertices.
pub fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Minimal spanning tree length by trying every labelled tree.
pub fn brute_force_mst(dist: &dyn Fn(usize, usize) -> f64, n: usize) -> f64 {
    if n == 2 {
        return dist(0, 1);
    }
    let len = n - 2;
    let mut best = f64::INFINITY;
    let mut seq = vec![0; len];
    loop {
        let total: f64 = prufer_edges(&seq, n).iter().map(|&(a, b)| dist(a, b)).sum();
        best = best.min(total);
        let mut i = 0;
        while i < len && seq[i] == n - 1 {
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return best;
        }
        seq[i] += 1;
    }
}

// ---------------------------------------------------------------- topologies

/// Number of distinct full Steiner topologies on `n` labelled terminals, counted by listing
/// every tree in which terminals are leaves and `n - 2` Steiner vertices have degree 3, and
/// identifying trees with the same set of terminal splits.
pub fn count_full_topologies(n: usize) -> usize {
    if n == 2 {
        return 1;
    }
    let steiner = n - 2;
    let total = n + steiner;
    // Prüfer sequences in which each Steiner vertex appears twice and no terminal appears
    let mut multiset: Vec<usize> = (n..total).flat_map(|s| [s, s]).collect();
    let mut shapes: HashSet<BTreeSet<u64>> = HashSet::new();
    multiset.sort_unstable();
    loop {
        shapes.insert(split_signature(&prufer_edges(&multiset, total), n));
        if !next_permutation(&mut multiset) {
            break;
        }
    }
    shapes.len()
}

/// Terminal bipartitions induced by removing each edge, as bitmasks containing terminal 0.
pub fn split_signature(edges: &[(usize, usize)], terminals: usize) -> BTreeSet<u64> {
    let vertices = edges.len() + 1;
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let full = (1u64 << terminals) - 1;
    edges
        .iter()
        .map(|&(a, b)| {
            let mut mask = 0u64;
            let mut stack = vec![a];
            let mut seen = vec![false; vertices];
            seen[a] = true;
            seen[b] = true;
            while let Some(v) = stack.pop() {
                if v < terminals {
                    mask |= 1 << v;
                }
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            if mask & 1 == 0 { full ^ mask } else { mask }
        })
        .collect()
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

// ---------------------------------------------------------------- plane Steiner problems

pub fn sum_dist(p: Vec2, sites: &[Vec2]) -> f64 {
    sites.iter().map(|s| (p - s).norm()).sum()
}

/// Weiszfeld iteration for the point minimizing the sum of distances, with the vertex
/// optimality test `|Σ unit vectors from the vertex| <= 1`.
pub fn weiszfeld(sites: &[Vec2]) -> Vec2 {
    for (i, &v) in sites.iter().enumerate() {
        let pull: Vec2 = sites
            .iter()
            .enumerate()
            .filter(|&(j, s)| j != i && (s - v).norm() > 0.0)
            .map(|(_, s)| (s - v).normalize())
            .sum();
        if pull.norm() <= 1.0 {
            return v;
        }
    }
    let mut p = sites.iter().sum::<Vec2>() / sites.len() as f64;
    for _ in 0..100_000 {
        let (mut num, mut den) = (Vec2::zeros(), 0.0);
        for s in sites {
            let w = 1.0 / (p - s).norm().max(1e-300);
            num += s * w;
            den += w;
        }
        let next = num / den;
        if (next - p).norm() < 1e-15 {
            return next;
        }
        p = next;
    }
    p
}

/// Sum-of-distances minimizer by repeatedly refined grid search.
pub fn grid_fermat(sites: &[Vec2]) -> Vec2 {
    let lo = sites.iter().fold(Vec2::repeat(f64::INFINITY), |m, s| m.inf(s));
    let hi = sites.iter().fold(Vec2::repeat(f64::NEG_INFINITY), |m, s| m.sup(s));
    let mut center = (lo + hi) / 2.0;
    let mut half = (hi - lo).max() / 2.0 + 1e-9;
    for _ in 0..80 {
        let steps = 20;
        let mut best = (f64::INFINITY, center);
        for i in 0..=steps {
            for j in 0..=steps {
                let p = center + Vec2::new(-half + 2.0 * half * i as f64 / steps as f64, -half + 2.0 * half * j as f64 / steps as f64);
                let v = sum_dist(p, sites);
                if v < best.0 {
                    best = (v, p);
                }
            }
        }
        center = best.1;
        half *= 0.5;
    }
    center
}

/// Shortest tree on four terminals with two Steiner points, over the three pairings, by
/// coarse-to-fine grid search of the two Steiner points.
pub fn grid_two_point_smt(t: [Vec2; 4]) -> f64 {
    let pairings = [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];
    let lo = t.iter().fold(Vec2::repeat(f64::INFINITY), |m, s| m.inf(s));
    let hi = t.iter().fold(Vec2::repeat(f64::NEG_INFINITY), |m, s| m.sup(s));
    let mut best = f64::INFINITY;
    for (left, right) in pairings {
        let cost = |s1: Vec2, s2: Vec2| {
            (s1 - t[left[0]]).norm() + (s1 - t[left[1]]).norm() + (s1 - s2).norm() + (s2 - t[right[0]]).norm() + (s2 - t[right[1]]).norm()
        };
        let steps = 16;
        let mut centers = ((lo + hi) / 2.0, (lo + hi) / 2.0);
        let mut half = (hi - lo).max() / 2.0;
        let mut value = f64::INFINITY;
        for _ in 0..14 {
            let grid = |c: Vec2, i: usize, j: usize| {
                c + Vec2::new(-half + 2.0 * half * i as f64 / steps as f64, -half + 2.0 * half * j as f64 / steps as f64)
            };
            let mut local = (f64::INFINITY, centers);
            for i1 in 0..=steps {
                for j1 in 0..=steps {
                    let s1 = grid(centers.0, i1, j1);
                    for i2 in 0..=steps {
                        for j2 in 0..=steps {
                            let s2 = grid(centers.1, i2, j2);
                            let v = cost(s1, s2);
                            if v < local.0 {
                                local = (v, (s1, s2));
                            }
                        }
                    }
                }
            }
            value = local.0;
            centers = local.1;
            half *= 0.5;
        }
        best = best.min(value);
    }
    best
}
