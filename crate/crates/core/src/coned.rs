//! Certified Cayley balls and the coned-off metric graph.
//!
//! [`ConedBall`] materializes the ball of radius `R + S` in the Cayley
//! graph of an Artin group (every vertex certified distinct via the
//! reduction-based word problem), identifies the visible pieces of
//! two-generator cosets, and attaches a cone vertex over each piece that
//! touches the core radius `R`.  Distances are measured in the
//! barycentric subdivision where every original graph edge counts 2
//! units and every cone edge counts 1, so the coned-off metric (cone
//! points at half-integer distance from their coset) becomes integral.

use crate::artin::{equal_in_g, gate, DehnOptions};
use crate::words::{Error, GroupSpec, Syllable, Word};
use rand::Rng;
use std::collections::HashMap;

/// Node index into the subdivided graph: group vertices first, then
/// cone vertices, then edge midpoints.
pub type NodeId = u32;

/// Construction limits for [`ConedBall::build`].
#[derive(Debug, Clone)]
pub struct BallOptions {
    /// Core radius `R`: cones attach to coset members within this depth.
    pub radius: u64,
    /// Extra shell `S`: coset pieces are traced out to depth `R + S`.
    pub slack: u64,
    /// Abort with [`Error::ResourceCap`] beyond this many group vertices.
    pub max_vertices: usize,
    /// Options for the word-problem certifier.
    pub dehn: DehnOptions,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            radius: 3,
            slack: 1,
            max_vertices: 500_000,
            dehn: DehnOptions::default(),
        }
    }
}

/// One visible coset piece of a two-generator standard subgroup,
/// together with the cone vertex drawn over it.
#[derive(Debug, Clone)]
pub struct Cone {
    /// Generator pair `(i, j)` with `i < j`.
    pub i: u16,
    pub j: u16,
    /// Every ball vertex in this coset piece (depth up to `R + S`).
    pub members_full: Vec<u32>,
    /// Members within the core radius `R`; cone edges go to exactly these.
    pub members: Vec<u32>,
    /// Smallest depth among `members_full`.
    pub min_depth: u64,
}

/// A path in the subdivided graph, listed as consecutive node ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPath {
    pub nodes: Vec<NodeId>,
}

impl XPath {
    /// Length in subdivided units (each hop is one unit).
    pub fn len_units(&self) -> u32 {
        self.nodes.len().saturating_sub(1) as u32
    }
}

/// Result of geodesic enumeration between two nodes.
#[derive(Debug, Clone)]
pub struct GeodesicSet {
    /// Geodesics in a fixed lexicographic order, at most the requested cap.
    pub paths: Vec<XPath>,
    /// Total number of geodesics (saturating at `u64::MAX`).
    pub total: u64,
    /// True when `total` exceeded the cap and `paths` is a prefix.
    pub truncated: bool,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Deterministic: smaller id wins, so roots are the least member.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// The coned-off ball: certified group vertices, coset cones, and the
/// unit-length subdivided graph over both.
pub struct ConedBall {
    spec: GroupSpec,
    radius: u64,
    slack: u64,
    /// Canonical (shortlex-least geodesic) spelling per group vertex.
    words: Vec<Word>,
    depths: Vec<u64>,
    index: HashMap<Word, u32>,
    /// Normalized edge list: `(x, y, gen)` meaning `x · a_gen = y`.
    edges: Vec<(u32, u32, u16)>,
    /// Labeled Cayley adjacency: per vertex, `(neighbor, gen, sign)`.
    gadj: Vec<Vec<(u32, u16, i64)>>,
    cones: Vec<Cone>,
    /// Per finite pair, vertex -> cone index (`u32::MAX` when the piece
    /// has no cone, i.e. lives entirely in the shell).
    cone_of: Vec<Vec<u32>>,
    /// Whether the coset partition of the core was already produced by
    /// shell depth `S - 1` (false when `S == 0` and cones exist).
    stabilized: bool,
    /// Unit-length adjacency over group + cone + midpoint nodes.
    xadj: Vec<Vec<NodeId>>,
    midpoints: HashMap<(u32, u32), NodeId>,
    /// Midpoint node -> its edge index.
    midpoint_edge: Vec<u32>,
}

impl ConedBall {
    pub fn build(spec: &GroupSpec, opts: &BallOptions) -> Result<ConedBall, Error> {
        gate(spec, &opts.dehn)?;
        let full = opts.radius + opts.slack;
        let pairs = spec.finite_pairs();
        // When every defining relation needs at least this many letters,
        // distinct freely reduced words short of it are distinct elements,
        // and the word-problem call can be skipped.
        let free_cut: u64 = pairs
            .iter()
            .map(|&(_, _, m)| 2 * m as u64)
            .min()
            .unwrap_or(u64::MAX);

        let mut words: Vec<Word> = Vec::new();
        let mut depths: Vec<u64> = Vec::new();
        let mut index: HashMap<Word, u32> = HashMap::new();
        let mut buckets: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
        let mut layers: Vec<Vec<u32>> = Vec::new();
        let mut edges: Vec<(u32, u32, u16)> = Vec::new();
        let mut edge_seen: std::collections::HashSet<(u32, u32, u16)> =
            std::collections::HashSet::new();

        let n = spec.n();
        let push_vertex = |w: Word,
                               d: u64,
                               words: &mut Vec<Word>,
                               depths: &mut Vec<u64>,
                               index: &mut HashMap<Word, u32>,
                               buckets: &mut HashMap<Vec<i64>, Vec<u32>>|
         -> Result<u32, Error> {
            let id = words.len() as u32;
            if words.len() >= opts.max_vertices {
                return Err(Error::ResourceCap(format!(
                    "ball exceeded {} vertices at radius {}",
                    opts.max_vertices, full
                )));
            }
            index.insert(w.clone(), id);
            buckets.entry(w.ab_vector(n)).or_default().push(id);
            words.push(w);
            depths.push(d);
            Ok(id)
        };

        let e0 = push_vertex(
            Word::empty(),
            0,
            &mut words,
            &mut depths,
            &mut index,
            &mut buckets,
        )?;
        layers.push(vec![e0]);

        // One step of the certified search: the freely built word either
        // names an already-known element (then only the edge is new) or a
        // genuinely new vertex.
        let resolve = |cand: &Word,
                       words: &Vec<Word>,
                       buckets: &HashMap<Vec<i64>, Vec<u32>>|
         -> Result<Option<u32>, Error> {
            if let Some(list) = buckets.get(&cand.ab_vector(n)) {
                for &v in list {
                    let known = &words[v as usize];
                    if known == cand {
                        return Ok(Some(v));
                    }
                    if cand.letter_len() + known.letter_len() < free_cut {
                        continue;
                    }
                    if equal_in_g(spec, cand, known, &opts.dehn)? {
                        return Ok(Some(v));
                    }
                }
            }
            Ok(None)
        };

        let mut add_edge = |x: u32, gen: u16, sign: i64, y: u32| {
            let key = if sign > 0 { (x, y, gen) } else { (y, x, gen) };
            if edge_seen.insert(key) {
                edges.push(key);
            }
        };

        for d in 0..full {
            let mut cands: Vec<(Word, u32, u16, i64)> = Vec::new();
            for &x in &layers[d as usize] {
                let base = words[x as usize].clone();
                for g in 1..=n {
                    for sign in [1i64, -1] {
                        let cand = base.concat(&Word::from_syllables([Syllable::new(g, sign)]));
                        if cand.letter_len() == d + 1 {
                            cands.push((cand, x, g, sign));
                        }
                    }
                }
            }
            // Shortlex-least candidate first, so the first spelling
            // inserted for each new element is its canonical form.
            cands.sort_by(|a, b| {
                a.0.shortlex_cmp(&b.0)
                    .then(a.1.cmp(&b.1))
                    .then(a.2.cmp(&b.2))
            });
            let mut layer: Vec<u32> = Vec::new();
            for (cand, parent, g, sign) in cands {
                let target = match resolve(&cand, &words, &buckets)? {
                    Some(v) => v,
                    None => {
                        let id = push_vertex(
                            cand,
                            d + 1,
                            &mut words,
                            &mut depths,
                            &mut index,
                            &mut buckets,
                        )?;
                        layer.push(id);
                        id
                    }
                };
                add_edge(parent, g, sign, target);
            }
            layers.push(layer);
        }

        // Vertices on the outermost layer were never expanded; sweep them
        // once more to pick up edges that stay inside the ball.
        if full > 0 {
            for &x in &layers[full as usize] {
                let base = words[x as usize].clone();
                for g in 1..=n {
                    for sign in [1i64, -1] {
                        let cand = base.concat(&Word::from_syllables([Syllable::new(g, sign)]));
                        if let Some(v) = resolve(&cand, &words, &buckets)? {
                            add_edge(x, g, sign, v);
                        }
                    }
                }
            }
        }
        edges.sort_unstable();
        let mut gadj: Vec<Vec<(u32, u16, i64)>> = vec![Vec::new(); words.len()];
        for &(x, y, g) in &edges {
            gadj[x as usize].push((y, g, 1));
            gadj[y as usize].push((x, g, -1));
        }

        // Coset pieces: connected components of the in-pair edges.
        let vcount = words.len();
        let component_roots = |max_depth: u64,
                               pi: u16,
                               pj: u16,
                               edges: &[(u32, u32, u16)],
                               depths: &[u64]|
         -> UnionFind {
            let mut uf = UnionFind::new(vcount);
            for &(x, y, g) in edges {
                if (g == pi || g == pj)
                    && depths[x as usize] <= max_depth
                    && depths[y as usize] <= max_depth
                {
                    uf.union(x, y);
                }
            }
            uf
        };

        let mut cones: Vec<Cone> = Vec::new();
        let mut cone_of: Vec<Vec<u32>> = Vec::new();
        let mut stabilized = pairs.is_empty() || opts.slack > 0;
        for &(pi, pj, _m) in &pairs {
            let mut uf = component_roots(full, pi, pj, &edges, &depths);
            let mut by_root: HashMap<u32, Vec<u32>> = HashMap::new();
            for v in 0..vcount as u32 {
                by_root.entry(uf.find(v)).or_default().push(v);
            }
            let mut roots: Vec<u32> = by_root.keys().copied().collect();
            roots.sort_unstable();
            let mut map = vec![u32::MAX; vcount];
            for root in roots {
                let members_full = by_root.remove(&root).unwrap();
                let members: Vec<u32> = members_full
                    .iter()
                    .copied()
                    .filter(|&v| depths[v as usize] <= opts.radius)
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let min_depth = members_full
                    .iter()
                    .map(|&v| depths[v as usize])
                    .min()
                    .unwrap();
                let idx = cones.len() as u32;
                for &v in &members_full {
                    map[v as usize] = idx;
                }
                cones.push(Cone {
                    i: pi,
                    j: pj,
                    members_full,
                    members,
                    min_depth,
                });
            }
            cone_of.push(map);

            // Stability: the partition of core vertices must match the one
            // computed with the shell shrunk by one.
            if opts.slack > 0 && stabilized {
                let mut sub = component_roots(full - 1, pi, pj, &edges, &depths);
                let mut pairing: HashMap<u32, u32> = HashMap::new();
                let mut reverse: HashMap<u32, u32> = HashMap::new();
                for v in 0..vcount as u32 {
                    if depths[v as usize] > opts.radius {
                        continue;
                    }
                    let a = uf.find(v);
                    let b = sub.find(v);
                    let ok = match (pairing.get(&a), reverse.get(&b)) {
                        (None, None) => {
                            pairing.insert(a, b);
                            reverse.insert(b, a);
                            true
                        }
                        (Some(&b2), Some(&a2)) => b2 == b && a2 == a,
                        _ => false,
                    };
                    if !ok {
                        stabilized = false;
                        break;
                    }
                }
            }
        }

        // Assemble the subdivided graph: group nodes, cone nodes, then one
        // midpoint per graph edge.
        let ccount = cones.len();
        let mut midpoints: HashMap<(u32, u32), NodeId> = HashMap::new();
        let mut midpoint_edge: Vec<u32> = Vec::new();
        let total = vcount + ccount + edges.len();
        let mut xadj: Vec<Vec<NodeId>> = vec![Vec::new(); total];
        for (ei, &(x, y, _g)) in edges.iter().enumerate() {
            let mid = (vcount + ccount + ei) as NodeId;
            let key = if x < y { (x, y) } else { (y, x) };
            midpoints.insert(key, mid);
            midpoint_edge.push(ei as u32);
            xadj[x as usize].push(mid);
            xadj[y as usize].push(mid);
            xadj[mid as usize].push(x);
            xadj[mid as usize].push(y);
        }
        for (ci, cone) in cones.iter().enumerate() {
            let cnode = (vcount + ci) as NodeId;
            for &v in &cone.members {
                xadj[cnode as usize].push(v);
                xadj[v as usize].push(cnode);
            }
        }
        for list in &mut xadj {
            list.sort_unstable();
            list.dedup();
        }

        Ok(ConedBall {
            spec: spec.clone(),
            radius: opts.radius,
            slack: opts.slack,
            words,
            depths,
            index,
            edges,
            gadj,
            cones,
            cone_of,
            stabilized,
            xadj,
            midpoints,
            midpoint_edge,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn slack(&self) -> u64 {
        self.slack
    }

    pub fn full_radius(&self) -> u64 {
        self.radius + self.slack
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    pub fn core_vertex_count(&self) -> usize {
        self.depths.iter().filter(|&&d| d <= self.radius).count()
    }

    pub fn cone_count(&self) -> usize {
        self.cones.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Total nodes in the subdivided graph.
    pub fn node_count(&self) -> usize {
        self.words.len() + self.cones.len() + self.edges.len()
    }

    pub fn word_of(&self, v: u32) -> &Word {
        &self.words[v as usize]
    }

    pub fn depth_of(&self, v: u32) -> u64 {
        self.depths[v as usize]
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Normalized graph edges `(x, y, gen)` with `x · a_gen = y`.
    pub fn gamma_edges(&self) -> &[(u32, u32, u16)] {
        &self.edges
    }

    pub fn is_group_node(&self, node: NodeId) -> bool {
        (node as usize) < self.words.len()
    }

    pub fn is_cone_node(&self, node: NodeId) -> bool {
        let v = self.words.len();
        (node as usize) >= v && (node as usize) < v + self.cones.len()
    }

    pub fn is_midpoint_node(&self, node: NodeId) -> bool {
        (node as usize) >= self.words.len() + self.cones.len()
    }

    pub fn cone_node_id(&self, cone_idx: u32) -> NodeId {
        self.words.len() as NodeId + cone_idx
    }

    /// The cone index owning this coset piece, if any, for the pair at
    /// `pair_idx` in [`GroupSpec::finite_pairs`] order.
    pub fn cone_of(&self, pair_idx: usize, v: u32) -> Option<u32> {
        let c = self.cone_of[pair_idx][v as usize];
        if c == u32::MAX {
            None
        } else {
            Some(c)
        }
    }

    pub fn midpoint_between(&self, a: u32, b: u32) -> Option<NodeId> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.midpoints.get(&key).copied()
    }

    /// For a midpoint node, the edge it subdivides: `(x, y, gen)` with
    /// `x · a_gen = y`.
    pub fn midpoint_info(&self, node: NodeId) -> Option<(u32, u32, u16)> {
        let base = self.words.len() + self.cones.len();
        let idx = (node as usize).checked_sub(base)?;
        let ei = *self.midpoint_edge.get(idx)? as usize;
        Some(self.edges[ei])
    }

    /// The cone a cone-node stands over.
    pub fn cone_index(&self, node: NodeId) -> Option<usize> {
        let v = self.words.len();
        let idx = (node as usize).checked_sub(v)?;
        if idx < self.cones.len() {
            Some(idx)
        } else {
            None
        }
    }

    /// Letter-metric distances from one group vertex to all others,
    /// walking Cayley edges only.
    pub fn gamma_dists(&self, from: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.words.len()];
        let mut queue = std::collections::VecDeque::new();
        dist[from as usize] = 0;
        queue.push_back(from);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x as usize];
            for &(y, _, _) in &self.gadj[x as usize] {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Traces a word letter by letter from a vertex, returning the
    /// vertex–midpoint node sequence, or None once it exits the ball.
    pub fn walk_gamma(&self, from: u32, w: &Word) -> Option<Vec<NodeId>> {
        let mut nodes: Vec<NodeId> = vec![from];
        let mut at = from;
        for (g, sign) in w.letters() {
            let next = self.gadj[at as usize]
                .iter()
                .find(|&&(_, eg, es)| eg == g && es == sign)
                .map(|&(v, _, _)| v)?;
            nodes.push(self.midpoint_between(at, next)?);
            nodes.push(next);
            at = next;
        }
        Some(nodes)
    }

    /// Locates the element a word names by walking edges from the identity.
    pub fn locate(&self, w: &Word) -> Result<u32, Error> {
        self.spec.check_word(w)?;
        let mut at = 0u32;
        for (g, sign) in w.letters() {
            let next = self.gadj[at as usize]
                .iter()
                .find(|&&(_, eg, es)| eg == g && es == sign)
                .map(|&(v, _, _)| v);
            at = next.ok_or(Error::OutsideBall)?;
        }
        Ok(at)
    }

    pub fn node_label(&self, node: NodeId) -> String {
        let v = self.words.len();
        let c = self.cones.len();
        let idx = node as usize;
        if idx < v {
            let w = &self.words[idx];
            if w.is_empty() {
                "1".to_string()
            } else {
                w.token_string()
            }
        } else if idx < v + c {
            let cone = &self.cones[idx - v];
            format!("cone(a{},a{})#{}", cone.i, cone.j, idx - v)
        } else {
            let (x, y, g) = self.edges[idx - v - c];
            format!("mid({},a{},{})", self.node_label(x), g, self.node_label(y))
        }
    }

    /// Unit-distance BFS from one node over the subdivided graph.
    pub fn bfs_dists(&self, from: NodeId) -> Vec<u32> {
        self.multi_source_dists(std::slice::from_ref(&from))
    }

    /// Neighbors of a node in the subdivided graph.
    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.xadj[node as usize]
    }

    pub fn multi_source_dists(&self, sources: &[NodeId]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = std::collections::VecDeque::new();
        for &s in sources {
            if dist[s as usize] != 0 {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let dx = dist[x as usize];
            for &y in &self.xadj[x as usize] {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> u32 {
        self.bfs_dists(a)[b as usize]
    }

    /// Directed Hausdorff-style bound: the larger of the two one-sided
    /// excesses between the node sets, in subdivided units.
    pub fn hausdorff(&self, a: &[NodeId], b: &[NodeId]) -> u32 {
        if a.is_empty() || b.is_empty() {
            return if a.is_empty() && b.is_empty() {
                0
            } else {
                u32::MAX
            };
        }
        let da = self.multi_source_dists(a);
        let db = self.multi_source_dists(b);
        let one = b.iter().map(|&x| da[x as usize]).max().unwrap();
        let two = a.iter().map(|&x| db[x as usize]).max().unwrap();
        one.max(two)
    }

    /// Number of geodesics between two nodes (saturating).
    pub fn geodesic_count(&self, a: NodeId, b: NodeId) -> u64 {
        self.geodesic_field(a).count(b)
    }

    /// Distances and geodesic counts from one source, reusable across many
    /// targets.
    pub fn geodesic_field(&self, a: NodeId) -> GeodesicField<'_> {
        let dist = self.bfs_dists(a);
        let mut order: Vec<NodeId> = (0..self.node_count() as NodeId)
            .filter(|&x| dist[x as usize] != u32::MAX)
            .collect();
        order.sort_by_key(|&x| dist[x as usize]);
        let mut counts = vec![0u64; self.node_count()];
        counts[a as usize] = 1;
        for &x in &order {
            if x == a {
                continue;
            }
            let dx = dist[x as usize];
            let mut c: u64 = 0;
            for &p in &self.xadj[x as usize] {
                if dist[p as usize] + 1 == dx {
                    c = c.saturating_add(counts[p as usize]);
                }
            }
            counts[x as usize] = c;
        }
        GeodesicField {
            ball: self,
            source: a,
            dist,
            counts,
        }
    }

    /// Enumerates geodesics from `a` to `b` in lexicographic node order,
    /// keeping at most `cap` of them.
    pub fn geodesics(&self, a: NodeId, b: NodeId, cap: usize) -> GeodesicSet {
        self.geodesic_field(a).paths(b, cap)
    }

    /// Draws one geodesic from `a` to `b`, close to uniformly at random
    /// (exact when counts do not saturate).
    pub fn sample_geodesic<R: Rng>(&self, a: NodeId, b: NodeId, rng: &mut R) -> Option<XPath> {
        self.geodesic_field(a).sample(b, rng)
    }

    /// Label of a path between two vertices of one coset piece, walking
    /// only edges of that pair's two generators.  Returns a geodesic
    /// in-piece label (fewest Γ-edges), as a word over the pair.
    pub fn pair_path_label(&self, pair_idx: usize, from: u32, to: u32) -> Option<Word> {
        let (pi, pj, _m) = *self.spec.finite_pairs().get(pair_idx)?;
        if self.cone_of[pair_idx][from as usize] != self.cone_of[pair_idx][to as usize] {
            return None;
        }
        if from == to {
            return Some(Word::empty());
        }
        // BFS over in-pair edges only.
        let mut prev: HashMap<u32, (u32, u16, i64)> = HashMap::new();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(from);
        prev.insert(from, (from, 0, 0));
        'bfs: while let Some(x) = queue.pop_front() {
            for &(dst, g, sign) in &self.gadj[x as usize] {
                if (g == pi || g == pj) && !prev.contains_key(&dst) {
                    prev.insert(dst, (x, g, sign));
                    if dst == to {
                        break 'bfs;
                    }
                    queue.push_back(dst);
                }
            }
        }
        if !prev.contains_key(&to) {
            return None;
        }
        let mut letters_rev = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, g, sign) = prev[&cur];
            letters_rev.push((g, sign));
            cur = p;
        }
        letters_rev.reverse();
        Some(Word::from_letters(letters_rev))
    }

    /// Maps a node of this ball to the same node of another ball over the
    /// same group, when it exists there.
    pub fn node_image(&self, node: NodeId, other: &ConedBall) -> Option<NodeId> {
        let v = self.words.len();
        let c = self.cones.len();
        let idx = node as usize;
        if idx < v {
            other.index.get(&self.words[idx]).copied()
        } else if idx < v + c {
            let cone = &self.cones[idx - v];
            let pair_idx = other
                .spec
                .finite_pairs()
                .iter()
                .position(|&(i, j, _)| i == cone.i && j == cone.j)?;
            let member = cone.members_full.first()?;
            let img = other.index.get(&self.words[*member as usize]).copied()?;
            let cidx = other.cone_of(pair_idx, img)?;
            Some(other.cone_node_id(cidx))
        } else {
            let (x, y, _g) = self.edges[idx - v - c];
            let ix = other.index.get(&self.words[x as usize]).copied()?;
            let iy = other.index.get(&self.words[y as usize]).copied()?;
            other.midpoint_between(ix, iy)
        }
    }
}

/// Per-source shortest-path data: distances, geodesic counts, and the
/// machinery to enumerate or sample geodesics to any target.
pub struct GeodesicField<'a> {
    ball: &'a ConedBall,
    source: NodeId,
    dist: Vec<u32>,
    counts: Vec<u64>,
}

impl GeodesicField<'_> {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn dist(&self, b: NodeId) -> u32 {
        self.dist[b as usize]
    }

    pub fn dists(&self) -> &[u32] {
        &self.dist
    }

    /// Number of geodesics to `b` (saturating; 0 when unreachable).
    pub fn count(&self, b: NodeId) -> u64 {
        if self.dist[b as usize] == u32::MAX {
            0
        } else {
            self.counts[b as usize]
        }
    }

    /// Enumerates geodesics to `b` in lexicographic node order, keeping at
    /// most `cap` of them.
    pub fn paths(&self, b: NodeId, cap: usize) -> GeodesicSet {
        if self.dist[b as usize] == u32::MAX {
            return GeodesicSet {
                paths: Vec::new(),
                total: 0,
                truncated: false,
            };
        }
        let total = self.counts[b as usize];
        let mut paths = Vec::new();
        let mut stack: Vec<NodeId> = vec![b];
        // Walk backward from b; predecessors in ascending id order yield
        // paths sorted by their reversed node sequence.
        fn rec(
            field: &GeodesicField<'_>,
            cur: NodeId,
            stack: &mut Vec<NodeId>,
            paths: &mut Vec<XPath>,
            cap: usize,
        ) {
            if paths.len() >= cap {
                return;
            }
            if cur == field.source {
                let mut nodes = stack.clone();
                nodes.reverse();
                paths.push(XPath { nodes });
                return;
            }
            let dc = field.dist[cur as usize];
            for &p in &field.ball.xadj[cur as usize] {
                if field.dist[p as usize] + 1 == dc {
                    stack.push(p);
                    rec(field, p, stack, paths, cap);
                    stack.pop();
                    if paths.len() >= cap {
                        return;
                    }
                }
            }
        }
        rec(self, b, &mut stack, &mut paths, cap);
        let truncated = total > paths.len() as u64;
        GeodesicSet {
            paths,
            total,
            truncated,
        }
    }

    /// Draws one geodesic to `b`, close to uniformly at random (exact when
    /// counts do not saturate).
    pub fn sample<R: Rng>(&self, b: NodeId, rng: &mut R) -> Option<XPath> {
        if self.dist[b as usize] == u32::MAX {
            return None;
        }
        let mut rev = vec![b];
        let mut cur = b;
        while cur != self.source {
            let dc = self.dist[cur as usize];
            let preds: Vec<NodeId> = self.ball.xadj[cur as usize]
                .iter()
                .copied()
                .filter(|&p| self.dist[p as usize] + 1 == dc)
                .collect();
            let weight: u64 = preds
                .iter()
                .map(|&p| self.counts[p as usize])
                .fold(0u64, |s, c| s.saturating_add(c));
            let mut pick = rng.gen_range(0..weight.max(1));
            let mut chosen = preds[0];
            for &p in &preds {
                let c = self.counts[p as usize];
                if pick < c {
                    chosen = p;
                    break;
                }
                pick -= c;
            }
            rev.push(chosen);
            cur = chosen;
        }
        rev.reverse();
        Some(XPath { nodes: rev })
    }
}
