//! Finite groups given by multiplication tables.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group with elements `0..n`, index 0 the identity.
///
/// The product `mul(a, b)` is `ab`; when the group is built from permutations
/// this is composition with `b` applied first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Build from a multiplication table, checking the group axioms.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(Error::InvalidGroup(
                "table must be n×n with entries in 0..n".into(),
            ));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::InvalidGroup(
                    "index 0 is not a two-sided identity".into(),
                ));
            }
        }
        for row in &table {
            let mut seen = vec![false; n];
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidGroup(
                        "a row of the table is not a permutation".into(),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = vec![0; n];
        for a in 0..n {
            inverses[a] = (0..n)
                .find(|&b| table[a][b] == 0 && table[b][a] == 0)
                .ok_or_else(|| {
                    Error::InvalidGroup(format!("element {a} has no two-sided inverse"))
                })?;
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(_) => {
                return Err(Error::InvalidGroup(
                    "labels length differs from the order".into(),
                ))
            }
            None => (0..n)
                .map(|i| {
                    if i == 0 {
                        "1".to_string()
                    } else {
                        format!("g{i}")
                    }
                })
                .collect(),
        };
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|x| table[table[x][g]][inverses[x]]).collect();
            cls.sort_unstable();
            cls.dedup();
            for &c in &cls {
                class_of[c] = classes.len();
            }
            classes.push(cls);
        }
        Ok(FiniteGroup {
            table,
            inverses,
            classes,
            class_of,
            labels,
        })
    }

    /// Close a set of permutations of `0..m` under composition.
    pub fn from_permutations(gens: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self> {
        let m = gens.first().map_or(0, Vec::len);
        for g in gens {
            let mut seen = vec![false; m];
            if g.len() != m
                || g.iter()
                    .any(|&x| x >= m || std::mem::replace(&mut seen[x], true))
            {
                return Err(Error::InvalidGroup(
                    "generators must be permutations of one set".into(),
                ));
            }
        }
        let id: Vec<usize> = (0..m).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let prod: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect(); // g ∘ elem
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(prod);
                }
            }
        }
        let n = elems.len();
        let table = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| index[&elems[b].iter().map(|&x| elems[a][x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let labels = labels.unwrap_or_else(|| elems.iter().map(|p| cycle_notation(p)).collect());
        Self::from_table(table, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `x·g·x⁻¹`.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    /// Look up an element by label, falling back to a decimal index.
    pub fn element(&self, label: &str) -> Result<usize> {
        if let Some(i) = self.labels.iter().position(|l| l == label) {
            return Ok(i);
        }
        match label.parse::<usize>() {
            Ok(i) if i < self.order() => Ok(i),
            _ => Err(Error::UnknownLabel(label.to_string())),
        }
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        inside
    }

    /// A small deterministic generating set: a single generator when the group
    /// is cyclic, otherwise greedily adding the first element not yet reached.
    pub fn generators(&self) -> Vec<usize> {
        let n = self.order();
        if n == 1 {
            return Vec::new();
        }
        if let Some(g) = (1..n).find(|&g| self.element_order(g) == n) {
            return vec![g];
        }
        let mut gens = Vec::new();
        let mut inside = self.subgroup_generated(&gens);
        while let Some(g) = (1..n).find(|&g| !inside[g]) {
            gens.push(g);
            inside = self.subgroup_generated(&gens);
        }
        // drop redundant generators
        let mut i = 0;
        while i < gens.len() {
            let mut rest = gens.clone();
            rest.remove(i);
            if self.subgroup_generated(&rest).iter().all(|&b| b) {
                gens = rest;
            } else {
                i += 1;
            }
        }
        gens
    }

    /// Relabel the group by a permutation `perm` of `1..n` (0 stays fixed):
    /// the new element `perm[g]` plays the role of the old `g`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        let mut table = vec![vec![0; n]; n];
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..n {
                table[perm[a]][perm[b]] = perm[self.mul(a, b)];
            }
        }
        Self::from_table(table, Some(labels))
    }

    // ----- catalogue -----

    pub fn trivial() -> Self {
        Self::from_table(vec![vec![0]], Some(vec!["1".into()])).unwrap()
    }

    /// ℤ/n with generator `t`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let labels = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            })
            .collect();
        Self::from_table(table, Some(labels)).unwrap()
    }

    /// Dihedral group of order `2n`: `r^i s^j`, `s r s = r⁻¹`.
    pub fn dihedral(n: usize) -> Self {
        Self::metacyclic(n, false, "r", "s")
    }

    /// Dicyclic group of order `4n`: `a^i x^j`, `x a x⁻¹ = a⁻¹`, `x² = aⁿ`.
    pub fn dicyclic(n: usize) -> Self {
        Self::metacyclic(2 * n, true, "a", "x")
    }

    fn metacyclic(m: usize, dic: bool, r: &str, s: &str) -> Self {
        let idx = |i: usize, j: usize| i % m + m * j;
        let n = 2 * m;
        let mut table = vec![vec![0; n]; n];
        for (i, j) in (0..m).flat_map(|i| (0..2).map(move |j| (i, j))) {
            for (k, l) in (0..m).flat_map(|k| (0..2).map(move |l| (k, l))) {
                let prod = if j == 0 {
                    idx(i + k, l)
                } else if l == 0 {
                    idx(i + m - k, 1)
                } else {
                    // r^i s r^k s = r^{i-k} s^2
                    let base = i + m - k;
                    if dic {
                        idx(base + m / 2, 0)
                    } else {
                        idx(base, 0)
                    }
                };
                table[idx(i, j)][idx(k, l)] = prod;
            }
        }
        let labels = (0..n)
            .map(|e| {
                let (i, j) = (e % m, e / m);
                let rp = match i {
                    0 => String::new(),
                    1 => r.to_string(),
                    _ => format!("{r}^{i}"),
                };
                match (rp.is_empty(), j) {
                    (true, 0) => "1".to_string(),
                    (false, 0) => rp,
                    (_, _) => format!("{rp}{s}"),
                }
            })
            .collect();
        Self::from_table(table, Some(labels)).unwrap()
    }

    /// Quaternion group of order 8 with labels ±1, ±i, ±j, ±k.
    pub fn quaternion() -> Self {
        let g = Self::dicyclic(2);
        let labels = ["1", "i", "-1", "-i", "j", "k", "-j", "-k"]
            .map(String::from)
            .to_vec();
        Self::from_table(g.table, Some(labels)).unwrap()
    }

    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        if n == 1 {
            return Self::trivial();
        }
        let mut gens = vec![swap_perm(n, 0, 1)];
        if n > 2 {
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_permutations(&gens, None).unwrap()
    }

    pub fn alternating(n: usize) -> Self {
        assert!(n >= 1);
        if n < 3 {
            return Self::trivial();
        }
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(&gens, None).unwrap()
    }

    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (n, m) = (a.order(), b.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let labels = (0..n * m)
            .map(|x| {
                if x == 0 {
                    "1".to_string()
                } else {
                    format!("({},{})", a.label(x / m), b.label(x % m))
                }
            })
            .collect();
        Self::from_table(table, Some(labels)).unwrap()
    }

    /// Named groups: `trivial`, `Z<n>`/`C<n>`, `V4`, `D<n>` (order 2n),
    /// `Dic<n>` (order 4n), `Q8`, `S<n>`, `A<n>`, and `AxB` products of these.
    pub fn named(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some((l, r)) = name.split_once('x') {
            if !l.is_empty() && !r.is_empty() && !name.starts_with("Dic") {
                return Ok(Self::direct_product(&Self::named(l)?, &Self::named(r)?));
            }
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidGroup(format!("unknown group name `{name}`")))
        };
        match name {
            "trivial" | "1" => Ok(Self::trivial()),
            "V4" => Ok(Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))),
            "Q8" => Ok(Self::quaternion()),
            _ if name.starts_with("Dic") => Ok(Self::dicyclic(num(&name[3..])?)),
            _ if name.starts_with('Z') || name.starts_with('C') => {
                Ok(Self::cyclic(num(&name[1..])?.max(1)))
            }
            _ if name.starts_with('D') => Ok(Self::dihedral(num(&name[1..])?)),
            _ if name.starts_with('S') => Ok(Self::symmetric(num(&name[1..])?)),
            _ if name.starts_with('A') => Ok(Self::alternating(num(&name[1..])?)),
            _ => Err(Error::InvalidGroup(format!("unknown group name `{name}`"))),
        }
    }

    /// One representative of every isomorphism type of order ≤ 12.
    pub fn small_groups_up_to_12() -> Vec<(String, Self)> {
        [
            "trivial", "Z2", "Z3", "Z4", "V4", "Z5", "Z6", "S3", "Z7", "Z8", "Z4xZ2", "Z2xZ2xZ2",
            "D4", "Q8", "Z9", "Z3xZ3", "Z10", "D5", "Z11", "Z12", "Z6xZ2", "D6", "A4", "Dic3",
        ]
        .iter()
        .map(|n| (n.to_string(), Self::named(n).unwrap()))
        .collect()
    }
}

fn swap_perm(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

/// One-based cycle notation, `()` for the identity.
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        let mut cyc = vec![s + 1];
        seen[s] = true;
        let mut x = p[s];
        while x != s {
            seen[x] = true;
            cyc.push(x + 1);
            x = p[x];
        }
        out.push('(');
        out.push_str(
            &cyc.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// JSON group description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupInput {
    Named(String),
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Permutations {
        permutations: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    NamedObject {
        named: String,
    },
}

impl GroupInput {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupInput::Named(n) | GroupInput::NamedObject { named: n } => FiniteGroup::named(n),
            GroupInput::Table {
                order,
                table,
                labels,
            } => {
                if table.len() != *order {
                    return Err(Error::InvalidGroup(format!(
                        "order {order} but table has {} rows",
                        table.len()
                    )));
                }
                FiniteGroup::from_table(table.clone(), labels.clone())
            }
            GroupInput::Permutations {
                permutations,
                labels,
            } => FiniteGroup::from_permutations(permutations, labels.clone()),
        }
    }
}

/// Summary used by the `group info` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub labels: Vec<String>,
    pub element_orders: BTreeMap<String, usize>,
    pub classes: Vec<Vec<String>>,
    pub generators: Vec<String>,
    pub involutions: usize,
}

impl FiniteGroup {
    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            order: self.order(),
            abelian: self.is_abelian(),
            labels: self.labels.clone(),
            element_orders: (0..self.order())
                .map(|g| (self.labels[g].clone(), self.element_order(g)))
                .collect(),
            classes: self
                .classes
                .iter()
                .map(|c| c.iter().map(|&g| self.labels[g].clone()).collect())
                .collect(),
            generators: self
                .generators()
                .iter()
                .map(|&g| self.labels[g].clone())
                .collect(),
            involutions: (1..self.order())
                .filter(|&g| self.element_order(g) == 2)
                .count(),
        }
    }
}
