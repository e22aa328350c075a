use std::collections::BTreeSet;

use proptest::prelude::*;
use unavoidable_core::certificate::CertificateDocument;
use unavoidable_core::generators::{self, GeneratorSpec};
use unavoidable_core::io::{parse_edge_list, write_edge_list};
use unavoidable_core::{
    bfs_layers, fan_degree, is_strong, max_disjoint_paths, max_internally_disjoint, min_exterior_cost_dipath, n_impl,
    n_weak, shortest_dipath, unavoidable, verify_certificate, Certificate, Digraph, Dipath, VertexId,
};

const UNREACHABLE: usize = usize::MAX / 4;

fn v(i: usize) -> VertexId {
    VertexId(i as u32)
}

/// Digraph on `0..n` keeping the off-diagonal pairs whose bit is set.
fn build(n: usize, bits: &[bool]) -> Digraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && bits[a * n + b] {
                edges.push((v(a), v(b)));
            }
        }
    }
    Digraph::new((0..n).map(v), edges).unwrap()
}

fn digraph(max: usize) -> impl Strategy<Value = Digraph> {
    (1..=max).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * n).prop_map(move |b| build(n, &b)))
}

fn floyd_warshall(d: &Digraph) -> Vec<Vec<usize>> {
    let n = d.vertex_count();
    let mut dist = vec![vec![UNREACHABLE; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (a, b) in d.edges() {
        dist[a.0 as usize][b.0 as usize] = 1;
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                dist[i][j] = dist[i][j].min(dist[i][m] + dist[m][j]);
            }
        }
    }
    dist
}

/// Every simple `s`-`t` dipath with its interior inside `allowed`.
fn all_paths(d: &Digraph, s: usize, t: usize, allowed: &dyn Fn(usize) -> bool) -> Vec<Vec<usize>> {
    fn go(d: &Digraph, t: usize, allowed: &dyn Fn(usize) -> bool, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let top = *path.last().unwrap();
        for w in d.out_neighbors(v(top)).unwrap().map(|w| w.0 as usize) {
            if w == t {
                let mut done = path.clone();
                done.push(t);
                out.push(done);
            } else if allowed(w) && !path.contains(&w) && w != path[0] {
                path.push(w);
                go(d, t, allowed, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(d, t, allowed, &mut vec![s], &mut out);
    out
}

fn ids(p: &Dipath) -> Vec<usize> {
    p.vertices().iter().map(|x| x.0 as usize).collect()
}

fn subsets(pool: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u32..1 << pool.len()).map(move |mask| (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect())
}

/// Size of a smallest vertex set from `pool` meeting every dipath from a
/// vertex of `sources` to `sink` whose interior avoids `excluded`.
fn brute_separator(d: &Digraph, sources: &[usize], sink: usize, pool: &[usize], excluded: &[usize]) -> usize {
    subsets(pool)
        .filter(|cut| {
            sources
                .iter()
                .filter(|s| !cut.contains(s))
                .all(|&s| all_paths(d, s, sink, &|u| !cut.contains(&u) && !excluded.contains(&u)).is_empty())
        })
        .map(|cut| cut.len())
        .min()
        .expect("the full pool separates")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bfs_layers_match_distances(d in digraph(7), root in 0usize..7) {
        let root = root % d.vertex_count();
        let dist = floyd_warshall(&d);
        let bfs = bfs_layers(&d, v(root)).unwrap();
        for (depth, layer) in bfs.layers.iter().enumerate() {
            prop_assert!(layer.windows(2).all(|w| w[0] < w[1]));
            for x in layer {
                prop_assert_eq!(dist[root][x.0 as usize], depth);
                if depth > 0 {
                    let parent = bfs.parent[x];
                    let lowest = bfs.layers[depth - 1].iter().find(|p| d.has_edge(**p, *x)).unwrap();
                    prop_assert_eq!(parent, *lowest);
                    prop_assert_eq!(bfs.path_to(*x).unwrap().len(), depth);
                }
            }
        }
        let reached = (0..d.vertex_count()).filter(|&x| dist[root][x] < UNREACHABLE).count();
        prop_assert_eq!(bfs.reached(), reached);
    }

    #[test]
    fn strongness_matches_reachability(d in digraph(6)) {
        let dist = floyd_warshall(&d);
        let all = dist.iter().all(|row| row.iter().all(|&x| x < UNREACHABLE));
        prop_assert_eq!(is_strong(&d), all);
    }

    #[test]
    fn shortest_dipath_is_lexicographic_minimum(d in digraph(7), s in 0usize..7, t in 0usize..7, forbid in 0u32..128) {
        let n = d.vertex_count();
        let (s, t) = (s % n, t % n);
        prop_assume!(s != t);
        let forbidden: BTreeSet<VertexId> = (0..n).filter(|i| forbid >> i & 1 == 1).map(v).collect();
        let expected = all_paths(&d, s, t, &|u| !forbidden.contains(&v(u)))
            .into_iter()
            .min_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        let got = shortest_dipath(&d, v(s), v(t), &forbidden).unwrap();
        prop_assert_eq!(got.map(|p| ids(&p)), expected);
    }

    #[test]
    fn exterior_cost_search_is_optimal(
        d in digraph(6),
        s in 0usize..6,
        order in proptest::sample::subsequence((0usize..6).collect::<Vec<_>>(), 1..=3),
        forbid in 0u32..64,
        free_bits in proptest::collection::vec(any::<bool>(), 36),
    ) {
        let n = d.vertex_count();
        let s = s % n;
        let targets: Vec<usize> = order.into_iter().filter(|&t| t < n).collect();
        prop_assume!(!targets.is_empty());
        let forbidden: BTreeSet<VertexId> = (0..n).filter(|i| forbid >> i & 1 == 1).map(v).collect();
        let free: BTreeSet<(VertexId, VertexId)> =
            d.edges().filter(|(a, b)| free_bits[a.0 as usize * 6 + b.0 as usize]).collect();
        let cost = |p: &[usize]| p.windows(2).filter(|e| !free.contains(&(v(e[0]), v(e[1])))).count();

        let target_ids: Vec<VertexId> = targets.iter().map(|&t| v(t)).collect();
        let got = min_exterior_cost_dipath(&d, v(s), &target_ids, &forbidden, &free).unwrap();
        let expected = targets.iter().filter(|&&t| t != s).find_map(|&t| {
            let paths = all_paths(&d, s, t, &|u| !forbidden.contains(&v(u)));
            paths.into_iter().min_by(|a, b| (cost(a), a.len(), a).cmp(&(cost(b), b.len(), b))).map(|p| (t, p))
        });
        match (got, expected) {
            (None, None) => {}
            (Some(g), Some((t, p))) => {
                prop_assert_eq!(g.target, v(t));
                prop_assert_eq!(g.exterior_cost, cost(&p));
                prop_assert_eq!(ids(&g.path), p);
            }
            (g, e) => prop_assert!(false, "got {:?}, expected {:?}", g, e),
        }
    }

    #[test]
    fn disjoint_paths_meet_menger_bound(d in digraph(7), sink in 0usize..7, src in 1u32..128, excl in 0u32..128) {
        let n = d.vertex_count();
        let sink = sink % n;
        let sources: Vec<usize> = (0..n).filter(|&i| i != sink && src >> i & 1 == 1).collect();
        prop_assume!(!sources.is_empty());
        let excluded: Vec<usize> = (0..n).filter(|&i| i != sink && !sources.contains(&i) && excl >> i & 1 == 1).collect();
        let out = max_disjoint_paths(
            &d,
            &sources.iter().map(|&i| v(i)).collect(),
            v(sink),
            &excluded.iter().map(|&i| v(i)).collect(),
        ).unwrap();

        let pool: Vec<usize> = (0..n).filter(|&i| i != sink && !excluded.contains(&i)).collect();
        let best = brute_separator(&d, &sources, sink, &pool, &excluded);
        prop_assert_eq!(out.paths.len(), best);
        prop_assert_eq!(out.separator.len(), best);

        let mut used = BTreeSet::new();
        for p in &out.paths {
            prop_assert!(p.check(&d).is_ok());
            prop_assert!(sources.contains(&(p.first().0 as usize)));
            prop_assert_eq!(p.last(), v(sink));
            for x in &p.vertices()[..p.len()] {
                prop_assert!(used.insert(*x));
                prop_assert!(!excluded.contains(&(x.0 as usize)));
            }
        }
        let cut: Vec<usize> = out.separator.iter().map(|x| x.0 as usize).collect();
        for &s in &sources {
            let blocked = |u: usize| !cut.contains(&u) && !excluded.contains(&u);
            prop_assert!(cut.contains(&s) || all_paths(&d, s, sink, &blocked).is_empty());
        }
    }

    #[test]
    fn internally_disjoint_matches_separator(d in digraph(7), x in 0usize..7, y in 0usize..7) {
        let n = d.vertex_count();
        let (x, y) = (x % n, y % n);
        prop_assume!(x != y);
        let out = max_internally_disjoint(&d, v(x), v(y)).unwrap();
        let direct = d.has_edge(v(x), v(y));
        prop_assert_eq!(out.direct_edge, direct);
        let pool: Vec<usize> = (0..n).filter(|&i| i != x && i != y).collect();
        let best = subsets(&pool)
            .filter(|cut| {
                all_paths(&d, x, y, &|u| !cut.contains(&u)).iter().all(|p| p.len() == 2)
            })
            .map(|cut| cut.len())
            .min()
            .unwrap();
        prop_assert_eq!(out.paths.len(), best + usize::from(direct));
        prop_assert_eq!(out.separator.len(), best);
        let mut used = BTreeSet::new();
        for p in &out.paths {
            prop_assert!(p.check(&d).is_ok());
            prop_assert_eq!((p.first(), p.last()), (v(x), v(y)));
            for w in p.interior() {
                prop_assert!(used.insert(*w));
            }
        }
    }

    #[test]
    fn edge_lists_round_trip(d in digraph(8)) {
        let text = write_edge_list(&d, &["sample".to_string()]);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), d);
    }

    #[test]
    fn extraction_is_sound_and_serializes(size in 2usize..25, p in 0.0f64..0.6, seed in any::<u64>(), nk in 0usize..4) {
        let (n, k) = [(3, 1), (3, 2), (4, 2), (5, 3)][nk];
        let d = generators::random_strong(size, p, seed).unwrap();
        prop_assert!(is_strong(&d));
        let cert = unavoidable(&d, n, k).unwrap();
        prop_assert_eq!(verify_certificate(&d, &cert, n, k), Ok(()));
        if matches!(cert, Certificate::BelowThreshold { .. }) {
            prop_assert!((d.vertex_count() as u64) <= n_impl(n, k));
        }
        let doc = CertificateDocument::new(&cert, n, k);
        let back = CertificateDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(back.certificate().unwrap(), cert.clone());
        prop_assert_eq!((back.n, back.k), (n, k));
        prop_assert_eq!(unavoidable(&d, n, k).unwrap(), cert);
    }

    #[test]
    fn random_generator_is_deterministic(size in 1usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
        let spec = GeneratorSpec::RandomStrong { v: size, p, seed };
        let a = spec.generate().unwrap();
        let b = spec.generate().unwrap();
        prop_assert_eq!(write_edge_list(&a, &[spec.to_json()]), write_edge_list(&b, &[spec.to_json()]));
        prop_assert!(is_strong(&a));
        prop_assert_eq!(a.vertex_count(), size);
        let parsed: GeneratorSpec = serde_json::from_str(&spec.to_json()).unwrap();
        prop_assert_eq!(parsed, spec);
    }

    #[test]
    fn thresholds_are_monotone(n in 2usize..8, k in 1usize..6) {
        prop_assert!(fan_degree(n) <= fan_degree(n + 1));
        prop_assert!(n_weak(n) <= n_weak(n + 1));
        prop_assert!(n_impl(n, k) <= n_impl(n, k + 1));
        prop_assert!(n_impl(n, k) <= n_impl(n + 1, k));
        prop_assert!(n_impl(n, k) >= (n * k) as u64);
    }
}
