use std::fmt;

use crate::error::{invalid_param, Error, Result};

pub const MIN_N: usize = 2;
pub const MAX_N: usize = 7;

/// Candidate `index`, marked `erroneous` when its prediction is wrong.
/// Candidate 1 is always accurate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedIndex {
    pub index: u8,
    pub erroneous: bool,
}

impl SignedIndex {
    pub fn new(index: usize, erroneous: bool) -> Result<Self> {
        if index == 0 || index > MAX_N {
            return Err(invalid_param(format!("index {index} outside 1..={MAX_N}")));
        }
        if index == 1 && erroneous {
            return Err(invalid_param("candidate 1 is never erroneous"));
        }
        Ok(SignedIndex { index: index as u8, erroneous })
    }

    pub fn accurate(index: usize) -> Self {
        SignedIndex::new(index, false).expect("index in range")
    }

    pub fn err(index: usize) -> Self {
        SignedIndex::new(index, true).expect("index in range, not 1")
    }

    pub fn index(self) -> usize {
        self.index as usize
    }
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, if self.erroneous { "e" } else { "" })
    }
}

impl std::str::FromStr for SignedIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (digits, erroneous) = match s.strip_suffix('e') {
            Some(d) => (d, true),
            None => (s, false),
        };
        let index = digits.parse::<usize>().map_err(|_| invalid_param(format!("bad signed index `{s}`")))?;
        SignedIndex::new(index, erroneous)
    }
}

/// An observed arrival prefix: distinct candidates, each with its accuracy flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPermutation {
    entries: Vec<SignedIndex>,
}

impl PartialPermutation {
    pub fn new(entries: Vec<SignedIndex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(invalid_param("a partial permutation is non-empty"));
        }
        let mut seen = [false; MAX_N + 1];
        for e in &entries {
            if std::mem::replace(&mut seen[e.index()], true) {
                return Err(invalid_param(format!("index {} repeated", e.index)));
            }
        }
        Ok(PartialPermutation { entries })
    }

    pub fn entries(&self) -> &[SignedIndex] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> SignedIndex {
        *self.entries.last().expect("non-empty")
    }

    /// Variable name, e.g. `x_1_2e` for `(1, 2̄)`.
    pub fn var_name(&self) -> String {
        let mut s = String::from("x");
        for e in &self.entries {
            s.push('_');
            s.push_str(&e.to_string());
        }
        s
    }

    pub fn from_var_name(name: &str) -> Result<Self> {
        let rest =
            name.strip_prefix("x_").ok_or_else(|| invalid_param(format!("`{name}` is not a sequence variable")))?;
        PartialPermutation::new(rest.split('_').map(str::parse).collect::<Result<_>>()?)
    }
}

impl fmt::Display for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All partial permutations for `n` candidates, as a prefix tree.
///
/// Ids follow the canonical order: by length, then lexicographically.
#[derive(Clone, Debug)]
pub struct SigmaSet {
    n: usize,
    items: Vec<PartialPermutation>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<(SignedIndex, usize)>>,
    roots: Vec<(SignedIndex, usize)>,
}

impl SigmaSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[PartialPermutation] {
        &self.items
    }

    pub fn get(&self, id: usize) -> &PartialPermutation {
        &self.items[id]
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    /// Ids of the proper prefixes of `id`, shortest first.
    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.parent[id];
        while let Some(p) = cur {
            out.push(p);
            cur = self.parent[p];
        }
        out.reverse();
        out
    }

    /// Id of `node` extended by `next` (`node = None` is the empty prefix).
    pub fn child(&self, node: Option<usize>, next: SignedIndex) -> Option<usize> {
        let list = match node {
            None => &self.roots,
            Some(id) => &self.children[id],
        };
        list.iter().find(|(s, _)| *s == next).map(|&(_, id)| id)
    }

    pub fn id_of(&self, sigma: &PartialPermutation) -> Option<usize> {
        sigma.entries().iter().try_fold(None, |node, &s| self.child(node, s).map(Some)).flatten()
    }
}

/// `|Σ|` for `n` candidates, without enumerating.
pub fn sigma_count(n: usize) -> usize {
    // Ordered picks of `len` of the other `n - 1` indices, two variants each,
    // with candidate 1 optionally inserted at any of the positions.
    let picks = |len: usize| (0..len).map(|j| 2 * (n - 1 - j)).product::<usize>();
    (1..=n).map(|len| picks(len) + len * picks(len - 1)).sum()
}

/// Enumerates every partial permutation over candidates `1..=n` (each `i >= 2`
/// either accurate or erroneous), of every length `1..=n`.
pub fn enumerate_sigma(n: usize) -> Result<SigmaSet> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::BudgetExceeded(format!("n = {n} outside {MIN_N}..={MAX_N}")));
    }
    let alphabet: Vec<SignedIndex> = (1..=n)
        .flat_map(|i| {
            let acc = SignedIndex::accurate(i);
            if i == 1 {
                vec![acc]
            } else {
                vec![acc, SignedIndex::err(i)]
            }
        })
        .collect();

    let mut set = SigmaSet { n, items: Vec::new(), parent: Vec::new(), children: Vec::new(), roots: Vec::new() };
    let mut level: Vec<usize> = Vec::new();
    for &s in &alphabet {
        let id = set.items.len();
        set.items.push(PartialPermutation { entries: vec![s] });
        set.parent.push(None);
        set.children.push(Vec::new());
        set.roots.push((s, id));
        level.push(id);
    }
    for _ in 1..n {
        let mut next_level = Vec::new();
        for &p in &level {
            let mut used = [false; MAX_N + 1];
            for e in set.items[p].entries() {
                used[e.index()] = true;
            }
            for &s in alphabet.iter().filter(|s| !used[s.index()]) {
                let id = set.items.len();
                let mut entries = set.items[p].entries.clone();
                entries.push(s);
                set.items.push(PartialPermutation { entries });
                set.parent.push(Some(p));
                set.children.push(Vec::new());
                set.children[p].push((s, id));
                next_level.push(id);
            }
        }
        level = next_level;
    }
    Ok(set)
}
