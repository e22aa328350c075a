//! Instance generators: random strong digraphs, small canonical witnesses,
//! and finite truncations of the grid-like digraphs built from rays.
//!
//! Ray-based families number the vertex `x^i_j` (ray `i`, position `j`,
//! both from 1) as `(i - 1) * h + (j - 1)`, where `h` is the number of
//! vertices kept per ray. Every ray runs upwards, `x^i_j -> x^i_{j+1}`.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexId};
use crate::search::strong_components;

/// Largest vertex count any generator will produce.
pub const MAX_VERTICES: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    RandomStrong {
        v: usize,
        p: f64,
        seed: u64,
    },
    TriangleChain {
        k: usize,
    },
    Flower {
        m: usize,
    },
    HexagonalGrid {
        n: usize,
        h: usize,
    },
    CircularGrid {
        n: usize,
        h: usize,
    },
    BidirectedQuarterGrid {
        w: usize,
        h: usize,
        #[serde(default)]
        suppress: bool,
    },
    AscendingCyclicQuarterGrid {
        w: usize,
        h: usize,
    },
    DescendingCyclicQuarterGrid {
        w: usize,
        h: usize,
    },
    CompleteRayPrefix {
        w: usize,
        h: usize,
        c: usize,
    },
    SteinExample {
        l: usize,
        h: usize,
    },
}

impl GeneratorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::RandomStrong { .. } => "random_strong",
            GeneratorSpec::TriangleChain { .. } => "triangle_chain",
            GeneratorSpec::Flower { .. } => "flower",
            GeneratorSpec::HexagonalGrid { .. } => "hexagonal_grid",
            GeneratorSpec::CircularGrid { .. } => "circular_grid",
            GeneratorSpec::BidirectedQuarterGrid { .. } => "bidirected_quarter_grid",
            GeneratorSpec::AscendingCyclicQuarterGrid { .. } => "ascending_cyclic_quarter_grid",
            GeneratorSpec::DescendingCyclicQuarterGrid { .. } => "descending_cyclic_quarter_grid",
            GeneratorSpec::CompleteRayPrefix { .. } => "complete_ray_prefix",
            GeneratorSpec::SteinExample { .. } => "stein_example",
        }
    }

    pub fn generate(&self) -> Result<Digraph> {
        match *self {
            GeneratorSpec::RandomStrong { v, p, seed } => random_strong(v, p, seed),
            GeneratorSpec::TriangleChain { k } => triangle_chain(k),
            GeneratorSpec::Flower { m } => flower(m),
            GeneratorSpec::HexagonalGrid { n, h } => hexagonal_grid(n, h),
            GeneratorSpec::CircularGrid { n, h } => circular_grid(n, h),
            GeneratorSpec::BidirectedQuarterGrid { w, h, suppress } => bidirected_quarter_grid(w, h, suppress),
            GeneratorSpec::AscendingCyclicQuarterGrid { w, h } => cyclic_quarter_grid(Direction::Ascending, w, h),
            GeneratorSpec::DescendingCyclicQuarterGrid { w, h } => cyclic_quarter_grid(Direction::Descending, w, h),
            GeneratorSpec::CompleteRayPrefix { w, h, c } => complete_ray_prefix(w, h, c),
            GeneratorSpec::SteinExample { l, h } => stein_example(l, h),
        }
    }

    /// Compact one-line JSON, used in edge-list headers.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Ascending,
    Descending,
}

fn require(ok: bool, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(message()))
    }
}

fn checked_count(parts: &[usize]) -> Result<usize> {
    parts
        .iter()
        .try_fold(1usize, |acc, &p| acc.checked_mul(p))
        .filter(|&total| total <= MAX_VERTICES)
        .ok_or_else(|| Error::InvalidParameter(format!("more than {MAX_VERTICES} vertices requested")))
}

fn build(count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Digraph> {
    let set: BTreeSet<(usize, usize)> = edges.into_iter().collect();
    Digraph::new(
        (0..count as u32).map(VertexId),
        set.into_iter().map(|(u, v)| (VertexId(u as u32), VertexId(v as u32))),
    )
}

/// `rays` rays of `h` vertices each, with their upward edges.
struct Rays {
    h: usize,
    rays: usize,
    edges: Vec<(usize, usize)>,
}

impl Rays {
    fn new(rays: usize, h: usize) -> Result<Self> {
        checked_count(&[rays, h])?;
        let mut edges = Vec::new();
        for i in 1..=rays {
            for j in 1..h {
                edges.push(((i - 1) * h + j - 1, (i - 1) * h + j));
            }
        }
        Ok(Rays { h, rays, edges })
    }

    /// Id of `x^i_j`, or `None` outside the truncation.
    fn at(&self, i: usize, j: usize) -> Option<usize> {
        (1..=self.rays).contains(&i).then_some(())?;
        (1..=self.h).contains(&j).then(|| (i - 1) * self.h + j - 1)
    }

    /// Adds `x^a_s -> x^b_t` when both ends exist.
    fn link(&mut self, (a, s): (usize, usize), (b, t): (usize, usize)) {
        if let (Some(u), Some(v)) = (self.at(a, s), self.at(b, t)) {
            self.edges.push((u, v));
        }
    }

    fn finish(self) -> Result<Digraph> {
        build(self.rays * self.h, self.edges)
    }
}

/// Samples every ordered pair with probability `p`, then adds edges from
/// sink components to source components of the condensation until the
/// digraph is strong. Each added edge leaves the representative (lowest
/// id) of the lowest sink component and enters the representative of the
/// lowest other source component.
pub fn random_strong(v: usize, p: f64, seed: u64) -> Result<Digraph> {
    require(v >= 1, || "random_strong needs v >= 1".into())?;
    require((0.0..=1.0).contains(&p), || format!("edge probability {p} outside [0, 1]"))?;
    checked_count(&[v])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for u in 0..v {
        for w in 0..v {
            if u != w && rng.gen_bool(p) {
                edges.insert((u, w));
            }
        }
    }
    loop {
        let d = build(v, edges.iter().copied())?;
        let components = strong_components(&d);
        if components.len() <= 1 {
            return Ok(d);
        }
        let mut component_of = HashMap::new();
        for (c, members) in components.iter().enumerate() {
            for &x in members {
                component_of.insert(x.0 as usize, c);
            }
        }
        let mut has_out = vec![false; components.len()];
        let mut has_in = vec![false; components.len()];
        for &(u, w) in &edges {
            let (cu, cw) = (component_of[&u], component_of[&w]);
            if cu != cw {
                has_out[cu] = true;
                has_in[cw] = true;
            }
        }
        let representative = |c: usize| components[c][0].0 as usize;
        let mut order: Vec<usize> = (0..components.len()).collect();
        order.sort_by_key(|&c| representative(c));
        let sink = *order.iter().find(|&&c| !has_out[c]).expect("a condensation has a sink");
        let source =
            *order.iter().find(|&&c| !has_in[c] && c != sink).or_else(|| order.iter().find(|&&c| c != sink)).unwrap();
        edges.insert((representative(sink), representative(source)));
    }
}

/// Vertices `0..=2k`; triangle `i` is `2i -> 2i+1 -> 2i+2 -> 2i`.
pub fn triangle_chain(k: usize) -> Result<Digraph> {
    require(k >= 1, || "triangle_chain needs k >= 1".into())?;
    let count = checked_count(&[2, k])? + 1;
    let edges = (0..k).flat_map(|i| [(2 * i, 2 * i + 1), (2 * i + 1, 2 * i + 2), (2 * i + 2, 2 * i)]);
    build(count, edges)
}

/// `x = 0`, `y = 1` and petals `u_i = i + 1` for `i = 1..=m`, with
/// `x -> u_i -> y` and `y -> x`.
pub fn flower(m: usize) -> Result<Digraph> {
    require(m >= 1, || "flower needs m >= 1".into())?;
    let count = checked_count(&[m])? + 2;
    let edges = std::iter::once((1, 0)).chain((2..count).flat_map(|u| [(0, u), (u, 1)]));
    build(count, edges)
}

pub fn hexagonal_grid(n: usize, h: usize) -> Result<Digraph> {
    require(n >= 1 && h >= 1, || "hexagonal_grid needs n >= 1 and h >= 1".into())?;
    let mut g = Rays::new(n, h)?;
    for i in 1..n {
        for j in 1..=h {
            let up = if i % 2 == 1 { j % 4 == 1 } else { j % 4 == 2 };
            let down = if i % 2 == 1 { j % 4 == 3 } else { j % 4 == 0 };
            if up {
                g.link((i, j), (i + 1, j));
            }
            if down {
                g.link((i + 1, j), (i, j));
            }
        }
    }
    g.finish()
}

pub fn circular_grid(n: usize, h: usize) -> Result<Digraph> {
    require(n >= 2 && h >= 2, || "circular_grid needs n >= 2 and h >= 2".into())?;
    let mut g = Rays::new(n, h)?;
    for j in 1..=h {
        if j % 2 == 1 {
            for i in 2..n {
                g.link((i, j + 1), (i + 1, j));
            }
            g.link((1, j), (2, j));
        } else {
            g.link((n, j), (1, j));
        }
    }
    g.finish()
}

/// With `suppress`, ray vertices whose only edges are the two ray edges are
/// contracted away; surviving vertices keep their ids.
pub fn bidirected_quarter_grid(w: usize, h: usize, suppress: bool) -> Result<Digraph> {
    require(w >= 1 && h >= 8, || "bidirected_quarter_grid needs w >= 1 and h >= 8".into())?;
    let mut g = Rays::new(w, h)?;
    for i in 1..w {
        let mut j = 0;
        while 4 * j < h {
            g.link((i, 4 * j + 7), (i + 1, 4 * j + 1));
            g.link((i + 1, 4 * j + 2), (i, 4 * j + 8));
            j += 1;
        }
    }
    if !suppress {
        return g.finish();
    }
    let ray_edges = w * (h - 1);
    let cross = &g.edges[ray_edges..];
    let mut touched = vec![false; w * h];
    for &(u, v) in cross {
        touched[u] = true;
        touched[v] = true;
    }
    let mut edges: Vec<(usize, usize)> = cross.to_vec();
    let mut vertices = Vec::new();
    for i in 1..=w {
        let kept: Vec<usize> = (1..=h)
            .filter(|&j| j == 1 || j == h || touched[(i - 1) * h + j - 1])
            .map(|j| (i - 1) * h + j - 1)
            .collect();
        edges.extend(kept.windows(2).map(|p| (p[0], p[1])));
        vertices.extend(kept);
    }
    Digraph::new(
        vertices.into_iter().map(|x| VertexId(x as u32)),
        edges.into_iter().map(|(u, v)| (VertexId(u as u32), VertexId(v as u32))),
    )
}

pub fn cyclic_quarter_grid(direction: Direction, w: usize, h: usize) -> Result<Digraph> {
    require(w >= 2 && h >= 3, || "cyclic quarter grids need w >= 2 and h >= 3".into())?;
    let mut g = Rays::new(w, h)?;
    match direction {
        Direction::Ascending => {
            for j in (1..=h).step_by(2) {
                g.link((1, j), (2, j));
                for i in 2..w {
                    g.link((i, j + 3), (i + 1, j));
                }
            }
            for i in 2..=w {
                g.link((i, 2), (1, 2 * (i - 1)));
            }
        }
        Direction::Descending => {
            for i in 1..w {
                for j in (2..=h).step_by(2) {
                    g.link((i + 1, j), (i, j + 1));
                }
                g.link((1, 2 * i), (i + 1, 1));
            }
        }
    }
    g.finish()
}

/// `w` rays of `h` vertices plus, for every ordered pair of distinct rays
/// `(a, b)`, `c` dipaths `R_a -> f -> R_b` through fresh vertices `f`.
///
/// Incoming dipaths end at the bottom of a ray, ordered by source ray, so
/// the first vertex of every `R_b` with `b > 1` is entered from `R_1`.
/// Outgoing dipaths leave from the top, ordered by target ray. Fresh ids
/// start at `w * h`, allocated in `(a, b, t)` order.
pub fn complete_ray_prefix(w: usize, h: usize, c: usize) -> Result<Digraph> {
    require(w >= 2 && c >= 1, || "complete_ray_prefix needs w >= 2 and c >= 1".into())?;
    let slots = c.checked_mul(w - 1).ok_or_else(|| Error::InvalidParameter("too many connections".into()))?;
    require(h >= 1 && h >= 2 * slots, || format!("complete_ray_prefix needs h >= 2c(w-1) = {}", 2 * slots))?;
    let base = checked_count(&[w, h])?;
    let fresh_total = checked_count(&[w, slots])?;
    let count = base + fresh_total;
    require(count <= MAX_VERTICES, || format!("more than {MAX_VERTICES} vertices requested"))?;
    let mut g = Rays::new(w, h)?;
    let rank = |of: usize, skip: usize| if of < skip { of - 1 } else { of - 2 };
    let mut fresh = base;
    for a in 1..=w {
        for b in (1..=w).filter(|&b| b != a) {
            for t in 0..c {
                let tail = h - slots + rank(b, a) * c + t + 1;
                let head = rank(a, b) * c + t + 1;
                let (u, v) = (g.at(a, tail).unwrap(), g.at(b, head).unwrap());
                g.edges.push((u, fresh));
                g.edges.push((fresh, v));
                fresh += 1;
            }
        }
    }
    build(count, g.edges)
}

/// Rays `R_0` and `R^{i,k}` for `1 <= i <= 3`, `1 <= k <= l`, positions
/// `0..h`. Ray `R_0` has index 0 and `R^{i,k}` index `1 + (i-1) l + (k-1)`;
/// vertex `j` of ray `r` has id `r * h + j`.
pub fn stein_example(l: usize, h: usize) -> Result<Digraph> {
    require(l >= 1 && h >= 2, || "stein_example needs l >= 1 and h >= 2".into())?;
    let rays = checked_count(&[3, l])? + 1;
    checked_count(&[rays, h])?;
    let id = |ray: usize, j: usize| ray * h + j;
    let ray_of = |i: usize, k: usize| 1 + (i - 1) * l + (k - 1);
    let mut edges = Vec::new();
    for r in 0..rays {
        edges.extend((0..h - 1).map(|j| (id(r, j), id(r, j + 1))));
    }
    for j in 0..h {
        for i in 1..=3 {
            let mut chain = vec![id(0, j)];
            chain.extend((1..=l).map(|k| id(ray_of(i, k), j)));
            for pair in chain.windows(2) {
                edges.push(if j % 2 == 0 { (pair[0], pair[1]) } else { (pair[1], pair[0]) });
            }
        }
    }
    build(rays * h, edges)
}
