//! Subshifts of finite type and their combinatorics.
//!
//! A shift is described by a finite alphabet `{0, .., |A|-1}` and a 0/1
//! transition matrix; a word `a_1 .. a_n` is admissible when every adjacent
//! pair `a_i a_{i+1}` is an allowed transition. Everything downstream works on
//! admissible words: cylinders of rank `n` are named by admissible `n`-words,
//! locally constant potentials of depth `k` are functions on `k`-words, and
//! dynamics on depth-`k` cylinders is carried by the [`WordGraph`] (a de
//! Bruijn-type graph whose edges are the admissible `(k+1)`-words).
//!
//! All enumerations are lexicographic and bounded by the shift's word cap.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the number of entries any exhaustive scan may touch.
pub const DEFAULT_WORD_CAP: usize = 1 << 24;

const SYMBOL_CHARS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// A one-sided subshift of finite type with a primitive transition matrix.
#[derive(Clone, Debug)]
pub struct Sft {
    alphabet_size: usize,
    transitions: Vec<bool>,
    full_shift: bool,
    word_cap: usize,
}

impl PartialEq for Sft {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet_size == other.alphabet_size && self.transitions == other.transitions
    }
}

impl Eq for Sft {}

impl Sft {
    /// Builds a shift from a boolean transition matrix (`rows[a][b]` allows `ab`).
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidShift("alphabet must be non-empty".into()));
        }
        if n > 256 {
            return Err(Error::InvalidShift(format!(
                "alphabet size {n} exceeds 256 symbols"
            )));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidShift(format!(
                "transition row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        let transitions: Vec<bool> = rows.into_iter().flatten().collect();
        let full_shift = transitions.iter().all(|&t| t);
        let sft = Self {
            alphabet_size: n,
            transitions,
            full_shift,
            word_cap: DEFAULT_WORD_CAP,
        };
        sft.check_primitive()?;
        Ok(sft)
    }

    /// Full shift on `alphabet_size` symbols.
    pub fn full(alphabet_size: usize) -> Result<Self> {
        Self::new(vec![vec![true; alphabet_size]; alphabet_size])
    }

    /// The golden-mean shift on `{0, 1}` (the word `11` is forbidden).
    pub fn golden_mean() -> Self {
        Self::new(vec![vec![true, true], vec![true, false]]).expect("golden mean is primitive")
    }

    /// Builds a shift from a 0/1 integer matrix.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (j, &v) in r.iter().enumerate() {
                match v {
                    0 => row.push(false),
                    1 => row.push(true),
                    _ => {
                        return Err(Error::InvalidShift(format!(
                            "transition entry ({i},{j}) is {v}, expected 0 or 1"
                        )))
                    }
                }
            }
            out.push(row);
        }
        Self::new(out)
    }

    /// Returns a copy with a different enumeration cap.
    pub fn with_word_cap(mut self, cap: usize) -> Self {
        self.word_cap = cap.max(1);
        self
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn is_full(&self) -> bool {
        self.full_shift
    }

    pub fn word_cap(&self) -> usize {
        self.word_cap
    }

    #[inline]
    pub fn allows(&self, a: u8, b: u8) -> bool {
        self.transitions[a as usize * self.alphabet_size + b as usize]
    }

    /// Transition matrix as 0/1 rows.
    pub fn transition_rows(&self) -> Vec<Vec<u8>> {
        self.transitions
            .chunks(self.alphabet_size)
            .map(|r| r.iter().map(|&t| t as u8).collect())
            .collect()
    }

    /// Symbols `b` such that `ab` is admissible.
    pub fn successors(&self, a: u8) -> impl Iterator<Item = u8> + '_ {
        (0..self.alphabet_size as u16)
            .map(|b| b as u8)
            .filter(move |&b| self.allows(a, b))
    }

    /// Symbols that may follow `word`; every symbol when `word` is empty.
    pub fn followers(&self, word: &[u8]) -> Vec<u8> {
        match word.last() {
            Some(&a) => self.successors(a).collect(),
            None => (0..self.alphabet_size as u16).map(|b| b as u8).collect(),
        }
    }

    /// Whether every symbol is in range and every adjacent pair is allowed.
    pub fn is_admissible(&self, word: &[u8]) -> bool {
        word.iter().all(|&s| (s as usize) < self.alphabet_size)
            && word.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    pub fn check_word(&self, word: &[u8]) -> Result<()> {
        if word.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if !self.is_admissible(word) {
            return Err(Error::InvalidWord(format!(
                "{} is not admissible",
                Word::from(word.to_vec())
            )));
        }
        Ok(())
    }

    /// Number of admissible words of length `n` (saturating).
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let a = self.alphabet_size;
        let mut counts = vec![1u128; a];
        for _ in 1..n {
            let mut next = vec![0u128; a];
            for (x, &c) in counts.iter().enumerate() {
                for y in self.successors(x as u8) {
                    next[y as usize] = next[y as usize].saturating_add(c);
                }
            }
            counts = next;
        }
        counts.iter().fold(0u128, |s, &c| s.saturating_add(c))
    }

    /// `|A|^n`, saturating.
    pub fn code_space(&self, n: usize) -> u128 {
        let mut s: u128 = 1;
        for _ in 0..n {
            s = s.saturating_mul(self.alphabet_size as u128);
        }
        s
    }

    pub(crate) fn ensure_within_cap(&self, required: u128, what: impl Into<String>) -> Result<()> {
        if required > self.word_cap as u128 {
            return Err(Error::EnumerationLimit {
                what: what.into(),
                required,
                cap: self.word_cap,
            });
        }
        Ok(())
    }

    /// Caps exhaustive scans of words of length `n`.
    pub(crate) fn ensure_words_within_cap(&self, n: usize) -> Result<()> {
        self.ensure_within_cap(self.count_words(n), format!("admissible words of length {n}"))
    }

    /// Caps dense tables indexed by base-`|A|` codes of length-`n` words.
    pub(crate) fn ensure_code_space_within_cap(&self, n: usize) -> Result<()> {
        self.ensure_within_cap(self.code_space(n), format!("dense table of length-{n} words"))
    }

    /// Base-`|A|` code of a word.
    #[inline]
    pub fn code(&self, word: &[u8]) -> usize {
        word.iter()
            .fold(0usize, |c, &s| c * self.alphabet_size + s as usize)
    }

    fn check_primitive(&self) -> Result<()> {
        let n = self.alphabet_size;
        for a in 0..n as u16 {
            let a = a as u8;
            if self.successors(a).next().is_none() {
                return Err(Error::InvalidShift(format!("symbol {a} has no outgoing transition")));
            }
            if !(0..n as u16).any(|b| self.allows(b as u8, a)) {
                return Err(Error::InvalidShift(format!("symbol {a} has no incoming transition")));
            }
        }
        // Breadth-first levels from symbol 0; the period is the gcd of
        // level(u) + 1 - level(v) over all edges u -> v.
        let mut level = vec![usize::MAX; n];
        level[0] = 0;
        let mut queue = std::collections::VecDeque::from([0u8]);
        while let Some(u) = queue.pop_front() {
            for v in self.successors(u) {
                if level[v as usize] == usize::MAX {
                    level[v as usize] = level[u as usize] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level.contains(&usize::MAX) {
            return Err(Error::InvalidShift(
                "transition matrix is not primitive: not irreducible".into(),
            ));
        }
        let reverse_reach = {
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut stack = vec![0u8];
            while let Some(v) = stack.pop() {
                for u in 0..n as u16 {
                    if self.allows(u as u8, v) && !seen[u as usize] {
                        seen[u as usize] = true;
                        stack.push(u as u8);
                    }
                }
            }
            seen
        };
        if reverse_reach.iter().any(|&s| !s) {
            return Err(Error::InvalidShift(
                "transition matrix is not primitive: not irreducible".into(),
            ));
        }
        let mut period = 0usize;
        for u in 0..n {
            for v in self.successors(u as u8) {
                let d = (level[u] + 1).abs_diff(level[v as usize]);
                period = gcd(period, d);
            }
        }
        if period != 1 {
            return Err(Error::InvalidShift(format!(
                "transition matrix is not primitive: period {period}"
            )));
        }
        Ok(())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// JSON form of a shift: `{"alphabet_size": n, "transitions": [[0|1, ..], ..]}`
/// or `{"alphabet_size": n, "full_shift": true}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SftSpec {
    pub alphabet_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_shift: Option<bool>,
}

impl SftSpec {
    pub fn build(&self) -> Result<Sft> {
        match (&self.transitions, self.full_shift) {
            (Some(rows), _) => {
                if rows.len() != self.alphabet_size {
                    return Err(Error::InvalidShift(format!(
                        "alphabet_size is {} but transitions has {} rows",
                        self.alphabet_size,
                        rows.len()
                    )));
                }
                let sft = Sft::from_matrix(rows)?;
                if self.full_shift == Some(true) && !sft.is_full() {
                    return Err(Error::InvalidShift(
                        "full_shift is true but transitions forbid some pairs".into(),
                    ));
                }
                Ok(sft)
            }
            (None, Some(true)) => Sft::full(self.alphabet_size),
            _ => Err(Error::InvalidShift(
                "either transitions or \"full_shift\": true is required".into(),
            )),
        }
    }
}

impl From<&Sft> for SftSpec {
    fn from(sft: &Sft) -> Self {
        if sft.is_full() {
            SftSpec {
                alphabet_size: sft.alphabet_size(),
                transitions: None,
                full_shift: Some(true),
            }
        } else {
            SftSpec {
                alphabet_size: sft.alphabet_size(),
                transitions: Some(sft.transition_rows()),
                full_shift: None,
            }
        }
    }
}

/// A finite word over the alphabet, one byte per symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    /// Lexicographically smallest rotation.
    pub fn min_rotation(&self) -> Word {
        let n = self.0.len();
        (0..n)
            .map(|r| {
                let mut v = self.0[r..].to_vec();
                v.extend_from_slice(&self.0[..r]);
                v
            })
            .min()
            .map(Word)
            .unwrap_or_default()
    }
}

impl Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            match SYMBOL_CHARS.get(s as usize) {
                Some(&c) => write!(f, "{}", c as char)?,
                None => write!(f, "[{s}]")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.bytes()
            .map(|c| {
                SYMBOL_CHARS
                    .iter()
                    .position(|&x| x == c.to_ascii_lowercase())
                    .map(|p| p as u8)
                    .ok_or_else(|| Error::InvalidWord(format!("bad symbol {:?} in {s:?}", c as char)))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// Parses a word and checks it is admissible for `sft`.
pub fn parse_word(sft: &Sft, s: &str) -> Result<Word> {
    let w: Word = s.parse()?;
    sft.check_word(&w)?;
    Ok(w)
}

/// Callbacks for a depth-first walk over admissible words.
pub(crate) trait WordVisitor {
    /// Called after a symbol is appended; return `false` to skip the subtree.
    fn enter(&mut self, word: &[u8]) -> Result<bool>;
    /// Called before the symbol is removed.
    fn leave(&mut self, _word: &[u8]) {}
}

/// Lexicographic depth-first walk over all admissible words of length
/// `1..=max_len`.
pub(crate) fn walk_words<V: WordVisitor>(sft: &Sft, max_len: usize, visitor: &mut V) -> Result<()> {
    fn rec<V: WordVisitor>(
        sft: &Sft,
        max_len: usize,
        word: &mut Vec<u8>,
        visitor: &mut V,
    ) -> Result<()> {
        let last = *word.last().expect("non-empty");
        for b in 0..sft.alphabet_size() as u16 {
            let b = b as u8;
            if !sft.allows(last, b) {
                continue;
            }
            word.push(b);
            if visitor.enter(word)? && word.len() < max_len {
                rec(sft, max_len, word, visitor)?;
            }
            visitor.leave(word);
            word.pop();
        }
        Ok(())
    }
    if max_len == 0 {
        return Ok(());
    }
    let mut word = Vec::with_capacity(max_len);
    for a in 0..sft.alphabet_size() as u16 {
        word.push(a as u8);
        if visitor.enter(&word)? && max_len > 1 {
            rec(sft, max_len, &mut word, visitor)?;
        }
        visitor.leave(&word);
        word.pop();
    }
    Ok(())
}

/// Calls `f` on every admissible word of length exactly `n`, in
/// lexicographic order.
pub(crate) fn for_each_word<F: FnMut(&[u8])>(sft: &Sft, n: usize, mut f: F) {
    struct Leaves<'a, F> {
        n: usize,
        f: &'a mut F,
    }
    impl<F: FnMut(&[u8])> WordVisitor for Leaves<'_, F> {
        fn enter(&mut self, word: &[u8]) -> Result<bool> {
            if word.len() == self.n {
                (self.f)(word);
            }
            Ok(word.len() < self.n)
        }
    }
    walk_words(sft, n, &mut Leaves { n, f: &mut f }).expect("infallible visitor");
}

/// All admissible words of length `n`, in lexicographic order.
pub fn enumerate_words(sft: &Sft, n: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::InvalidWord("word length must be at least 1".into()));
    }
    sft.ensure_words_within_cap(n)?;
    let mut out = Vec::with_capacity(sft.count_words(n) as usize);
    for_each_word(sft, n, |w| out.push(Word::from(w)));
    Ok(out)
}

/// Graph on the admissible `k`-words of a shift: `w -> w'` whenever `w'` is
/// `w` with its first symbol dropped and one symbol appended, i.e. whenever
/// `w` followed by the last symbol of `w'` is an admissible `(k+1)`-word.
#[derive(Clone, Debug)]
pub struct WordGraph {
    sft: Sft,
    depth: usize,
    nodes: Vec<Word>,
    index: Vec<u32>,
    succ: Vec<Vec<u32>>,
    pred: Vec<Vec<u32>>,
}

const NO_NODE: u32 = u32::MAX;

impl WordGraph {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> &[Word] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Word {
        &self.nodes[i]
    }

    /// Index of a `k`-word, if admissible.
    #[inline]
    pub fn node_index(&self, word: &[u8]) -> Option<usize> {
        debug_assert_eq!(word.len(), self.depth);
        match self.index.get(self.sft.code(word)) {
            Some(&i) if i != NO_NODE => Some(i as usize),
            _ => None,
        }
    }

    #[inline]
    pub(crate) fn node_index_by_code(&self, code: usize) -> Option<usize> {
        match self.index.get(code) {
            Some(&i) if i != NO_NODE => Some(i as usize),
            _ => None,
        }
    }

    #[inline]
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.succ[i].iter().map(|&j| j as usize)
    }

    #[inline]
    pub fn predecessors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.pred[i].iter().map(|&j| j as usize)
    }

    /// Symbol sequence of a closed node walk `v_0 -> v_1 -> .. -> v_{p-1} -> v_0`.
    pub fn cycle_word(&self, cycle: &[usize]) -> Word {
        Word(cycle.iter().map(|&v| self.nodes[v][0]).collect())
    }
}

/// Builds the depth-`k` word graph.
pub fn word_graph(sft: &Sft, k: usize) -> Result<WordGraph> {
    if k == 0 {
        return Err(Error::InvalidWord("graph depth must be at least 1".into()));
    }
    sft.ensure_code_space_within_cap(k)?;
    sft.ensure_words_within_cap(k + 1)?;
    let nodes = enumerate_words(sft, k)?;
    let mut index = vec![NO_NODE; sft.code_space(k) as usize];
    for (i, w) in nodes.iter().enumerate() {
        index[sft.code(w)] = i as u32;
    }
    let a = sft.alphabet_size();
    let tail_mod = sft.code_space(k - 1) as usize;
    let mut succ = vec![Vec::new(); nodes.len()];
    let mut pred = vec![Vec::new(); nodes.len()];
    for (i, w) in nodes.iter().enumerate() {
        let tail = sft.code(w) % tail_mod;
        let last = *w.last().expect("k >= 1");
        for b in sft.successors(last) {
            let j = index[tail * a + b as usize];
            debug_assert_ne!(j, NO_NODE);
            succ[i].push(j);
            pred[j as usize].push(i as u32);
        }
    }
    for p in &mut pred {
        p.sort_unstable();
    }
    Ok(WordGraph {
        sft: sft.clone(),
        depth: k,
        nodes,
        index,
        succ,
        pred,
    })
}

/// A periodic point `(cycle)^∞`, stored as its lexicographically smallest
/// rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PeriodicOrbit {
    cycle: Word,
}

impl PeriodicOrbit {
    /// Builds the orbit of `cycle^∞`; the last-to-first transition must be allowed.
    pub fn new(sft: &Sft, cycle: Word) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidWord("empty cycle".into()));
        }
        let mut doubled = cycle.to_vec();
        doubled.extend_from_slice(&cycle);
        if !sft.is_admissible(&doubled) {
            return Err(Error::InvalidWord(format!("{cycle} does not close up")));
        }
        Ok(Self {
            cycle: cycle.min_rotation(),
        })
    }

    pub(crate) fn from_canonical(cycle: Word) -> Self {
        Self {
            cycle: cycle.min_rotation(),
        }
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn point(&self) -> SymbolStream {
        SymbolStream::periodic(self.cycle.to_vec())
    }
}

impl fmt::Display for PeriodicOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^inf", self.cycle)
    }
}

/// All periodic orbits given by simple cycles of the depth-1 graph with
/// period at most `max_period`.
pub fn periodic_orbits(sft: &Sft, max_period: usize) -> Result<Vec<PeriodicOrbit>> {
    periodic_orbits_at_depth(sft, 1, max_period)
}

/// Simple cycles of the depth-`k` graph with length at most `max_period`,
/// each reported once up to rotation, sorted by period then word.
pub fn periodic_orbits_at_depth(
    sft: &Sft,
    depth: usize,
    max_period: usize,
) -> Result<Vec<PeriodicOrbit>> {
    let g = word_graph(sft, depth)?;
    let cap = sft.word_cap();
    let mut found: BTreeSet<(usize, Word)> = BTreeSet::new();
    let mut steps: usize = 0;
    let n = g.node_count();
    let mut on_path = vec![false; n];
    let mut path: Vec<usize> = Vec::new();

    // Cycles are rooted at their smallest node, so each appears exactly once.
    fn dfs(
        g: &WordGraph,
        root: usize,
        v: usize,
        max_period: usize,
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        found: &mut BTreeSet<(usize, Word)>,
        steps: &mut usize,
        cap: usize,
    ) -> Result<()> {
        *steps += 1;
        if *steps > cap || found.len() > cap {
            return Err(Error::EnumerationLimit {
                what: "simple cycle enumeration".into(),
                required: (*steps).max(found.len()) as u128,
                cap,
            });
        }
        for w in g.successors(v) {
            if w == root {
                let word = g.cycle_word(path).min_rotation();
                found.insert((word.len(), word));
            } else if w > root && !on_path[w] && path.len() < max_period {
                on_path[w] = true;
                path.push(w);
                dfs(g, root, w, max_period, on_path, path, found, steps, cap)?;
                path.pop();
                on_path[w] = false;
            }
        }
        Ok(())
    }

    if max_period == 0 {
        return Ok(Vec::new());
    }
    for root in 0..n {
        on_path[root] = true;
        path.push(root);
        dfs(&g, root, root, max_period, &mut on_path, &mut path, &mut found, &mut steps, cap)?;
        path.pop();
        on_path[root] = false;
    }
    Ok(found
        .into_iter()
        .map(|(_, w)| PeriodicOrbit::from_canonical(w))
        .collect())
}

/// An eventually periodic one-sided sequence `prefix cycle cycle ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolStream {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

impl SymbolStream {
    pub fn new(prefix: Vec<u8>, cycle: Vec<u8>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidWord("eventually periodic stream needs a cycle".into()));
        }
        Ok(Self { prefix, cycle })
    }

    pub fn periodic(cycle: Vec<u8>) -> Self {
        assert!(!cycle.is_empty(), "empty cycle");
        Self {
            prefix: Vec::new(),
            cycle,
        }
    }

    /// Symbol at 1-based position `i`.
    pub fn symbol(&self, i: usize) -> u8 {
        let j = i - 1;
        if j < self.prefix.len() {
            self.prefix[j]
        } else {
            self.cycle[(j - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The image under the left shift.
    pub fn shifted(&self) -> Self {
        if self.prefix.is_empty() {
            let mut c = self.cycle.clone();
            c.rotate_left(1);
            Self {
                prefix: Vec::new(),
                cycle: c,
            }
        } else {
            Self {
                prefix: self.prefix[1..].to_vec(),
                cycle: self.cycle.clone(),
            }
        }
    }
}

/// `d(x, y) = 2^{-n}` with `n` the first (1-based) index where the streams
/// differ; `0` when they are equal.
pub fn shift_metric(x: &SymbolStream, y: &SymbolStream) -> f64 {
    let p1 = x.cycle.len();
    let p2 = y.cycle.len();
    let horizon = x.prefix.len().max(y.prefix.len()) + p1 / gcd(p1, p2) * p2;
    (1..=horizon)
        .find(|&i| x.symbol(i) != y.symbol(i))
        .map_or(0.0, |i| 0.5f64.powi(i as i32))
}
