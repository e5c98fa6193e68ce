//! Combinatorial G-covers of a closed surface, branched over finitely many points.
//!
//! The base surface has one vertex, loops `x_i, y_i` (i = 1..h) and `z_j`
//! (j = 1..n), a polygon with boundary `[x1,y1]…[xh,yh]·z1…zn` where
//! `[a,b] = a b a⁻¹ b⁻¹`, and one disk per branch point glued along `z_j⁻¹`.
//! The cover has vertex set G, edges `(g, s)` from `g` to `g·φ(s)`, and the
//! deck group acts by left multiplication.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupInput};
use crate::linalg::ZMatrix;

/// A base loop: `x_i`, `y_i` or `z_j` (zero-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X(usize),
    Y(usize),
    Z(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X(i) => write!(f, "x{}", i + 1),
            Letter::Y(i) => write!(f, "y{}", i + 1),
            Letter::Z(j) => write!(f, "z{}", j + 1),
        }
    }
}

/// A word in the base loops; the sign is `+1` or `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word(pub Vec<(Letter, i8)>);

impl Word {
    /// Tokens `x1`, `y2`, `z3`, with powers `x1^2`, `y1^-1` (inverses may also
    /// be written in upper case, `X1`), separated by whitespace, `*` or `,`.
    /// The empty string is the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s
            .split(|c: char| c.is_whitespace() || c == '*' || c == ',')
            .filter(|t| !t.is_empty())
        {
            let (body, exp) = match tok.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?,
                ),
                None => (tok, 1),
            };
            let mut chars = body.chars();
            let head = chars
                .next()
                .ok_or_else(|| Error::Parse(format!("bad token `{tok}`")))?;
            let idx: usize = chars
                .as_str()
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| {
                    Error::Parse(format!("bad index in `{tok}` (indices start at 1)"))
                })?;
            let letter = match head.to_ascii_lowercase() {
                'x' => Letter::X(idx - 1),
                'y' => Letter::Y(idx - 1),
                'z' => Letter::Z(idx - 1),
                _ => return Err(Error::Parse(format!("unknown letter in `{tok}`"))),
            };
            let exp = if head.is_ascii_uppercase() { -exp } else { exp };
            let sign = if exp < 0 { -1 } else { 1 };
            out.extend(std::iter::repeat_n(
                (letter, sign),
                exp.unsigned_abs() as usize,
            ));
        }
        Ok(Word(out))
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&(l, s)| (l, -s)).collect())
    }

    pub fn concat(&self, o: &Self) -> Self {
        Word(self.0.iter().chain(&o.0).copied().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .0
            .iter()
            .map(|(l, s)| {
                if *s > 0 {
                    l.to_string()
                } else {
                    format!("{l}^-1")
                }
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// Monodromy data of a regular G-cover.
#[derive(Clone, Debug)]
pub struct CoverSpec {
    group: Arc<FiniteGroup>,
    handles: Vec<(usize, usize)>,
    branch: Vec<usize>,
}

/// Group element given by label or index in JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

impl ElementRef {
    pub fn resolve(&self, g: &FiniteGroup) -> Result<usize> {
        match self {
            ElementRef::Index(i) if *i < g.order() => Ok(*i),
            ElementRef::Index(i) => Err(Error::UnknownLabel(i.to_string())),
            ElementRef::Label(s) => g.element(s),
        }
    }
}

/// JSON form: `{"group": …, "genus": h, "branch": [...], "handles": [[gx, gy], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverSpecInput {
    pub group: GroupInput,
    pub genus: usize,
    #[serde(default)]
    pub branch: Vec<ElementRef>,
    #[serde(default)]
    pub handles: Vec<(ElementRef, ElementRef)>,
}

impl CoverSpecInput {
    pub fn build(&self) -> Result<CoverSpec> {
        let g = Arc::new(self.group.build()?);
        if self.handles.len() != self.genus {
            return Err(Error::InvalidCover(format!(
                "genus {} but {} handle pairs",
                self.genus,
                self.handles.len()
            )));
        }
        let handles = self
            .handles
            .iter()
            .map(|(a, b)| Ok((a.resolve(&g)?, b.resolve(&g)?)))
            .collect::<Result<Vec<_>>>()?;
        let branch = self
            .branch
            .iter()
            .map(|c| c.resolve(&g))
            .collect::<Result<Vec<_>>>()?;
        CoverSpec::new(&g, handles, branch)
    }
}

impl CoverSpec {
    /// Checks the surface relation and connectedness.
    pub fn new(
        group: &Arc<FiniteGroup>,
        handles: Vec<(usize, usize)>,
        branch: Vec<usize>,
    ) -> Result<Self> {
        let n = group.order();
        if handles.iter().any(|&(a, b)| a >= n || b >= n) || branch.iter().any(|&c| c >= n) {
            return Err(Error::InvalidCover("monodromy index out of range".into()));
        }
        let spec = CoverSpec {
            group: group.clone(),
            handles,
            branch,
        };
        let rel = spec.word_monodromy(&spec.relator());
        if rel != 0 {
            return Err(Error::InvalidCover(format!(
                "surface relation Π[φ(x_i),φ(y_i)]·Π c_j = 1 fails (product is {})",
                group.label(rel)
            )));
        }
        let images: Vec<usize> = spec
            .handles
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(spec.branch.iter().copied())
            .collect();
        if !group.subgroup_generated(&images).iter().all(|&b| b) {
            return Err(Error::InvalidCover(
                "monodromy images do not generate the group (cover disconnected)".into(),
            ));
        }
        Ok(spec)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let input: CoverSpecInput =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        input.build()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn base_genus(&self) -> usize {
        self.handles.len()
    }

    pub fn branch(&self) -> &[usize] {
        &self.branch
    }

    pub fn handles(&self) -> &[(usize, usize)] {
        &self.handles
    }

    pub fn letters(&self) -> Vec<Letter> {
        let h = self.base_genus();
        (0..h)
            .flat_map(|i| [Letter::X(i), Letter::Y(i)])
            .chain((0..self.branch.len()).map(Letter::Z))
            .collect()
    }

    pub fn letter_index(&self, l: Letter) -> Result<usize> {
        let h = self.base_genus();
        match l {
            Letter::X(i) if i < h => Ok(2 * i),
            Letter::Y(i) if i < h => Ok(2 * i + 1),
            Letter::Z(j) if j < self.branch.len() => Ok(2 * h + j),
            _ => Err(Error::Parse(format!(
                "loop {l} does not exist on this base surface"
            ))),
        }
    }

    pub fn phi(&self, l: Letter) -> usize {
        match l {
            Letter::X(i) => self.handles[i].0,
            Letter::Y(i) => self.handles[i].1,
            Letter::Z(j) => self.branch[j],
        }
    }

    /// Product of the images in reading order.
    pub fn word_monodromy(&self, w: &Word) -> usize {
        w.0.iter().fold(0, |acc, &(l, s)| {
            let g = self.phi(l);
            self.group
                .mul(acc, if s > 0 { g } else { self.group.inv(g) })
        })
    }

    /// `[x1,y1]…[xh,yh]·z1…zn`.
    pub fn relator(&self) -> Word {
        let mut w = Vec::new();
        for i in 0..self.base_genus() {
            w.extend([
                (Letter::X(i), 1),
                (Letter::Y(i), 1),
                (Letter::X(i), -1),
                (Letter::Y(i), -1),
            ]);
        }
        w.extend((0..self.branch.len()).map(|j| (Letter::Z(j), 1)));
        Word(w)
    }

    /// `|G|(2 − 2h − n) + Σ_j |G|/ord(c_j)`.
    pub fn riemann_hurwitz_euler(&self) -> i64 {
        let n = self.group.order() as i64;
        let h = self.base_genus() as i64;
        let b = self.branch.len() as i64;
        n * (2 - 2 * h - b)
            + self
                .branch
                .iter()
                .map(|&c| n / self.group.element_order(c) as i64)
                .sum::<i64>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub sheet: usize,
    pub letter: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceKind {
    Polygon { sheet: usize },
    Disk { branch: usize, coset_rep: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub kind: FaceKind,
    /// Oriented boundary as `(edge, ±1)` in order.
    pub boundary: Vec<(usize, i8)>,
}

/// The cover as a 2-complex with its rotation system and deck action.
#[derive(Clone, Debug)]
pub struct CWSurface {
    spec: CoverSpec,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    /// Cyclic order of half-edges (`2e` = tail end, `2e+1` = head end) at each vertex.
    rotation: Vec<Vec<usize>>,
    face_perm: Vec<Vec<usize>>,
}

pub fn build_cover(spec: &CoverSpec) -> Result<CWSurface> {
    let g = spec.group.clone();
    let n = g.order();
    let letters = spec.letters();
    let s = letters.len();
    let edge_of = |sheet: usize, l: usize| sheet * s + l;
    let mut edges = Vec::with_capacity(n * s);
    for sheet in 0..n {
        for (li, &l) in letters.iter().enumerate() {
            edges.push(Edge {
                tail: sheet,
                head: g.mul(sheet, spec.phi(l)),
                sheet,
                letter: li,
            });
        }
    }
    let lift = |start: usize, w: &Word| -> Vec<(usize, i8)> {
        let mut cur = start;
        let mut out = Vec::new();
        for &(l, sign) in &w.0 {
            let li = spec.letter_index(l).expect("relator letters exist");
            let im = spec.phi(l);
            if sign > 0 {
                out.push((edge_of(cur, li), 1));
                cur = g.mul(cur, im);
            } else {
                cur = g.mul(cur, g.inv(im));
                out.push((edge_of(cur, li), -1));
            }
        }
        out
    };
    let relator = spec.relator();
    let mut faces: Vec<Face> = (0..n)
        .map(|sheet| Face {
            kind: FaceKind::Polygon { sheet },
            boundary: lift(sheet, &relator),
        })
        .collect();
    let mut disk_index = Vec::new(); // (branch, rep) -> face
    for (j, &c) in spec.branch.iter().enumerate() {
        let ord = g.element_order(c);
        let w = Word(vec![(Letter::Z(j), -1); ord]);
        let mut seen = vec![false; n];
        for r in 0..n {
            if seen[r] {
                continue;
            }
            let mut x = r;
            for _ in 0..ord {
                seen[x] = true;
                x = g.mul(x, c);
            }
            disk_index.push(((j, r), faces.len()));
            faces.push(Face {
                kind: FaceKind::Disk {
                    branch: j,
                    coset_rep: r,
                },
                boundary: lift(r, &w),
            });
        }
    }
    let coset_rep = |j: usize, x: usize| -> usize {
        let c = spec.branch[j];
        let mut best = x;
        let mut y = g.mul(x, c);
        while y != x {
            best = best.min(y);
            y = g.mul(y, c);
        }
        best
    };
    let face_perm: Vec<Vec<usize>> = (0..n)
        .map(|h| {
            faces
                .iter()
                .map(|f| match f.kind {
                    FaceKind::Polygon { sheet } => g.mul(h, sheet),
                    FaceKind::Disk {
                        branch,
                        coset_rep: r,
                    } => {
                        let target = (branch, coset_rep(branch, g.mul(h, r)));
                        disk_index
                            .iter()
                            .find(|(k, _)| *k == target)
                            .map(|(_, i)| *i)
                            .expect("coset disks exist")
                    }
                })
                .collect()
        })
        .collect();

    let rotation = rotation_system(n, &edges, &faces)?;
    let surface = CWSurface {
        spec: spec.clone(),
        edges,
        faces,
        rotation,
        face_perm,
    };
    let chi = surface.euler_characteristic();
    if chi != spec.riemann_hurwitz_euler() {
        return Err(Error::Internal(format!(
            "χ = {chi} disagrees with Riemann–Hurwitz {}",
            spec.riemann_hurwitz_euler()
        )));
    }
    Ok(surface)
}

/// Checks that every edge occurs once with each sign and that the link of
/// every vertex is a single cycle; returns the cyclic order at each vertex.
fn rotation_system(n_vertices: usize, edges: &[Edge], faces: &[Face]) -> Result<Vec<Vec<usize>>> {
    let mut uses = vec![[0usize; 2]; edges.len()];
    for f in faces {
        for &(e, s) in &f.boundary {
            uses[e][usize::from(s < 0)] += 1;
        }
    }
    if let Some(e) = uses.iter().position(|u| *u != [1, 1]) {
        return Err(Error::Internal(format!(
            "edge {e} is not traversed once in each direction"
        )));
    }
    let vertex_of = |half: usize| {
        if half.is_multiple_of(2) {
            edges[half / 2].tail
        } else {
            edges[half / 2].head
        }
    };
    let mut link: Vec<Vec<usize>> = vec![Vec::new(); 2 * edges.len()];
    for f in faces {
        let b = &f.boundary;
        for k in 0..b.len() {
            let (ein, sin) = b[(k + b.len() - 1) % b.len()];
            let (eout, sout) = b[k];
            let end_half = if sin > 0 { 2 * ein + 1 } else { 2 * ein };
            let start_half = if sout > 0 { 2 * eout } else { 2 * eout + 1 };
            if vertex_of(end_half) != vertex_of(start_half) {
                return Err(Error::Internal("face boundary is not a closed path".into()));
            }
            link[end_half].push(start_half);
            link[start_half].push(end_half);
        }
    }
    let mut halves_at: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    for h in 0..2 * edges.len() {
        halves_at[vertex_of(h)].push(h);
    }
    let mut rotation = Vec::with_capacity(n_vertices);
    for (v, halves) in halves_at.iter().enumerate() {
        if halves.is_empty() {
            rotation.push(Vec::new());
            continue;
        }
        if halves.iter().any(|&h| link[h].len() != 2) {
            return Err(Error::Internal(format!(
                "vertex {v}: link is not 2-regular"
            )));
        }
        let mut cycle = vec![halves[0]];
        let mut prev = halves[0];
        let mut cur = link[halves[0]][0];
        while cur != halves[0] {
            cycle.push(cur);
            let next = if link[cur][0] == prev {
                link[cur][1]
            } else {
                link[cur][0]
            };
            prev = cur;
            cur = next;
            if cycle.len() > halves.len() {
                return Err(Error::Internal(format!(
                    "vertex {v}: link walk does not close"
                )));
            }
        }
        if cycle.len() != halves.len() {
            return Err(Error::Internal(format!(
                "vertex {v}: link is not a single cycle (surface condition fails)"
            )));
        }
        rotation.push(cycle);
    }
    Ok(rotation)
}

impl CWSurface {
    pub fn spec(&self) -> &CoverSpec {
        &self.spec
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.spec.group
    }

    pub fn num_vertices(&self) -> usize {
        self.spec.group.order()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    fn letters_per_sheet(&self) -> usize {
        self.edges.len() / self.num_vertices()
    }

    /// Image of edge `e` under the deck transformation `h`.
    pub fn edge_action(&self, h: usize, e: usize) -> usize {
        let s = self.letters_per_sheet();
        self.spec.group.mul(h, e / s) * s + e % s
    }

    pub fn face_action(&self, h: usize, f: usize) -> usize {
        self.face_perm[h][f]
    }

    pub fn vertex_action(&self, h: usize, v: usize) -> usize {
        self.spec.group.mul(h, v)
    }

    /// Vertex-by-edge boundary matrix.
    pub fn boundary_1(&self) -> ZMatrix {
        let mut m = ZMatrix::zeros(self.num_vertices(), self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            m[(e.head, i)] += 1;
            m[(e.tail, i)] -= 1;
        }
        m
    }

    /// Edge-by-face boundary matrix.
    pub fn boundary_2(&self) -> ZMatrix {
        let mut m = ZMatrix::zeros(self.edges.len(), self.faces.len());
        for (j, f) in self.faces.iter().enumerate() {
            for &(e, s) in &f.boundary {
                m[(e, j)] += i64::from(s);
            }
        }
        m
    }

    /// The lift of a base word through `start` as an edge chain, or the
    /// monodromy if the lift does not close up.
    pub fn lift_word(&self, w: &Word, start: usize) -> Result<Vec<BigInt>> {
        let g = &self.spec.group;
        for &(l, _) in &w.0 {
            self.spec.letter_index(l)?;
        }
        let mono = self.spec.word_monodromy(w);
        if mono != 0 {
            return Err(Error::NontrivialMonodromy(g.label(mono).to_string()));
        }
        let s = self.letters_per_sheet();
        let mut chain = vec![BigInt::from(0); self.edges.len()];
        let mut cur = start;
        for &(l, sign) in &w.0 {
            let li = self.spec.letter_index(l)?;
            let im = self.spec.phi(l);
            if sign > 0 {
                chain[cur * s + li] += 1;
                cur = g.mul(cur, im);
            } else {
                cur = g.mul(cur, g.inv(im));
                chain[cur * s + li] -= 1;
            }
        }
        Ok(chain)
    }

    /// Summary used by the `cover build` subcommand.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.num_vertices(), self.edges.len(), self.faces.len())
    }
}

/// Breadth-first connectivity of the 1-skeleton (sanity check used in tests).
pub fn one_skeleton_connected(s: &CWSurface) -> bool {
    let n = s.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for e in s.edges() {
        adj[e.tail].push(e.head);
        adj[e.head].push(e.tail);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut q = VecDeque::from([0]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                q.push_back(w);
            }
        }
    }
    seen.into_iter().all(|b| b)
}
