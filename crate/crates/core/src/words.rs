//! Syllable words over a fixed generating set, and group presentations.
//!
//! A word is stored in syllable form `a_{h_1}^{n_1} ... a_{h_s}^{n_s}` with
//! `h_t != h_{t+1}` and `n_t != 0`; this makes the two word lengths of
//! interest (syllable count and letter count) directly readable and keeps
//! free reduction a single stack pass.

use std::collections::BTreeMap;
use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("generator index {0} out of range 1..={1}")]
    GeneratorOutOfRange(u16, u16),
    #[error("pair ({0}, {1}) is not a valid generator pair")]
    BadPair(u16, u16),
    #[error("pair ({0}, {1}) has infinite exponent; a finite one is required")]
    InfinitePair(u16, u16),
    #[error("word uses generator a{0} outside the expected pair")]
    ForeignGenerator(u16),
    #[error("group is not extra-large (some finite m < 4); pass the override to proceed")]
    NotExtraLarge,
    #[error("group file line {line}: {msg}")]
    GroupFile { line: usize, msg: String },
    #[error("malformed word token `{0}`")]
    WordToken(String),
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("word walks outside the ball")]
    OutsideBall,
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("reduction step did not shrink the word: {0}")]
    DehnStalled(String),
}

/// One syllable `a_gen^exp` with `exp != 0`. Generator indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: u16,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: u16, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// A freely reduced word in syllable form.
///
/// Invariant: adjacent syllables use distinct generators and every exponent
/// is nonzero. All constructors normalize, so `Word` values are always in
/// reduced syllable form and two words are freely equal iff they are `==`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    sylls: Vec<Syllable>,
}

impl Word {
    pub fn empty() -> Self {
        Word { sylls: Vec::new() }
    }

    /// Builds a word from raw syllables, merging adjacent same-generator
    /// syllables and dropping zero exponents (free reduction).
    pub fn from_syllables<I: IntoIterator<Item = Syllable>>(iter: I) -> Self {
        let mut out: Vec<Syllable> = Vec::new();
        for s in iter {
            if s.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.gen == s.gen => {
                    top.exp += s.exp;
                    if top.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(s),
            }
        }
        Word { sylls: out }
    }

    /// Builds a word from single letters given as `(generator, sign)`.
    pub fn from_letters<I: IntoIterator<Item = (u16, i64)>>(iter: I) -> Self {
        Self::from_syllables(iter.into_iter().map(|(g, s)| Syllable::new(g, s)))
    }

    pub fn generator(gen: u16) -> Self {
        Word::from_syllables([Syllable::new(gen, 1)])
    }

    pub fn power(gen: u16, exp: i64) -> Self {
        Word::from_syllables([Syllable::new(gen, exp)])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.sylls
    }

    pub fn is_empty(&self) -> bool {
        self.sylls.is_empty()
    }

    /// Syllable length `||w||`.
    pub fn syll_len(&self) -> usize {
        self.sylls.len()
    }

    /// Letter length `|w|` (sum of absolute exponents).
    pub fn letter_len(&self) -> u64 {
        self.sylls.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    /// Iterates over single letters `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (u16, i64)> + '_ {
        self.sylls.iter().flat_map(|s| {
            let sign = s.exp.signum();
            (0..s.exp.unsigned_abs()).map(move |_| (s.gen, sign))
        })
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_syllables(self.sylls.iter().chain(other.sylls.iter()).copied())
    }

    pub fn invert(&self) -> Word {
        Word {
            sylls: self
                .sylls
                .iter()
                .rev()
                .map(|s| Syllable::new(s.gen, -s.exp))
                .collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.invert())
    }

    /// Subword spanning whole syllables `range.start..range.end`.
    pub fn subword(&self, range: std::ops::Range<usize>) -> Word {
        Word {
            sylls: self.sylls[range].to_vec(),
        }
    }

    /// Letter-interval subword from syllable `start` to syllable `end`
    /// (inclusive), skipping the leading `drop_head` letters of syllable
    /// `start` and the trailing `drop_tail` letters of syllable `end`.
    /// This is the exponent-splitting extraction: a subword may begin or end
    /// inside a syllable, in which case the boundary syllable is split with
    /// the same sign and a smaller absolute exponent. With both drops zero
    /// this is the plain syllable-range subword.
    pub fn subword_clip(&self, start: usize, drop_head: u64, end: usize, drop_tail: u64) -> Word {
        assert!(start <= end && end < self.sylls.len());
        let first = self.sylls[start];
        let last = self.sylls[end];
        if start == end {
            let total = first.exp.unsigned_abs();
            assert!(drop_head + drop_tail < total);
            let keep = total - drop_head - drop_tail;
            return Word {
                sylls: vec![Syllable::new(first.gen, first.exp.signum() * keep as i64)],
            };
        }
        assert!(drop_head < first.exp.unsigned_abs());
        assert!(drop_tail < last.exp.unsigned_abs());
        let mut sylls = Vec::with_capacity(end - start + 1);
        let keep_first = first.exp.unsigned_abs() - drop_head;
        sylls.push(Syllable::new(
            first.gen,
            first.exp.signum() * keep_first as i64,
        ));
        sylls.extend_from_slice(&self.sylls[start + 1..end]);
        let keep_last = last.exp.unsigned_abs() - drop_tail;
        sylls.push(Syllable::new(last.gen, last.exp.signum() * keep_last as i64));
        Word { sylls }
    }

    /// Replaces the letter-interval subword described by the same
    /// coordinates as [`Word::subword_clip`] with `replacement`, freely
    /// reducing the result.
    pub fn splice_clip(
        &self,
        start: usize,
        drop_head: u64,
        end: usize,
        drop_tail: u64,
        replacement: &Word,
    ) -> Word {
        assert!(start <= end && end < self.sylls.len());
        let first = self.sylls[start];
        let last = self.sylls[end];
        let mut sylls: Vec<Syllable> = Vec::new();
        sylls.extend_from_slice(&self.sylls[..start]);
        if drop_head > 0 {
            sylls.push(Syllable::new(
                first.gen,
                first.exp.signum() * drop_head as i64,
            ));
        }
        sylls.extend(replacement.sylls.iter().copied());
        if drop_tail > 0 {
            sylls.push(Syllable::new(
                last.gen,
                last.exp.signum() * drop_tail as i64,
            ));
        }
        sylls.extend_from_slice(&self.sylls[end + 1..]);
        Word::from_syllables(sylls)
    }

    /// Strips conjugating prefix/suffix pairs: returns `(c, core)` with
    /// `self = c * core * c^-1` freely and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut conj: Vec<Syllable> = Vec::new();
        let mut core = self.sylls.clone();
        loop {
            if core.len() < 2 {
                break;
            }
            let first = core[0];
            let last = *core.last().unwrap();
            if first.gen != last.gen || first.exp.signum() == last.exp.signum() {
                break;
            }
            let t = first.exp.unsigned_abs().min(last.exp.unsigned_abs()) as i64;
            let cut = first.exp.signum() * t;
            conj.push(Syllable::new(first.gen, cut));
            core[0].exp -= cut;
            let lastidx = core.len() - 1;
            core[lastidx].exp += cut;
            if core[lastidx].exp == 0 {
                core.pop();
            }
            if core[0].exp == 0 {
                core.remove(0);
            }
            // After removing both boundary syllables the new boundary pair
            // may merge; rebuild handles cascades.
            core = Word::from_syllables(core).sylls;
        }
        (Word { sylls: conj }, Word { sylls: core })
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        let (_, core) = self.cyclic_reduce();
        core == *self
    }

    /// Exponent sum per generator (abelianization image), 1-based index map.
    pub fn ab_vector(&self, n: u16) -> Vec<i64> {
        let mut v = vec![0i64; n as usize + 1];
        for s in &self.sylls {
            v[s.gen as usize] += s.exp;
        }
        v
    }

    /// Set of generators used.
    pub fn generators_used(&self) -> Vec<u16> {
        let mut gens: Vec<u16> = self.sylls.iter().map(|s| s.gen).collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    /// Shortlex order on freely reduced words: first by letter length, then
    /// letter-by-letter with `a1 < a1^-1 < a2 < a2^-1 < ...`.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        let rank = |(g, s): (u16, i64)| (g, s < 0);
        self.letter_len()
            .cmp(&other.letter_len())
            .then_with(|| self.letters().map(rank).cmp(other.letters().map(rank)))
    }

    /// Parses a whitespace-separated token list (`a1 a2^-1`); the single
    /// token `1` denotes the empty word.
    pub fn parse(text: &str) -> Result<Word, Error> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks == ["1"] {
            return Ok(Word::empty());
        }
        Word::parse_tokens(toks.iter().copied())
    }

    /// Parses word tokens of the form `a3`, `a3^-2`, `a1^5`.
    pub fn parse_tokens<'a, I: IntoIterator<Item = &'a str>>(toks: I) -> Result<Word, Error> {
        let mut sylls = Vec::new();
        for tok in toks {
            let bad = || Error::WordToken(tok.to_string());
            let rest = tok.strip_prefix('a').ok_or_else(bad)?;
            let (gen_str, exp) = match rest.split_once('^') {
                Some((g, e)) => (g, e.parse::<i64>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let gen: u16 = gen_str.parse().map_err(|_| bad())?;
            if gen == 0 || exp == 0 {
                return Err(bad());
            }
            sylls.push(Syllable::new(gen, exp));
        }
        Ok(Word::from_syllables(sylls))
    }

    /// Renders the word as dot-joined tokens (`a1.a2^-1`), `1` if empty;
    /// used in machine output records.
    pub fn token_string(&self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.sylls
            .iter()
            .map(|s| {
                if s.exp == 1 {
                    format!("a{}", s.gen)
                } else {
                    format!("a{}^{}", s.gen, s.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .sylls
            .iter()
            .map(|s| {
                if s.exp == 1 {
                    format!("a{}", s.gen)
                } else {
                    format!("a{}^{}", s.gen, s.exp)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Exponent attached to a generator pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MCoeff {
    Finite(u32),
    Infinite,
}

impl MCoeff {
    pub fn finite(self) -> Option<u32> {
        match self {
            MCoeff::Finite(m) => Some(m),
            MCoeff::Infinite => None,
        }
    }
}

impl fmt::Display for MCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MCoeff::Finite(m) => write!(f, "{m}"),
            MCoeff::Infinite => write!(f, "inf"),
        }
    }
}

/// An Artin presentation: `n` generators and a symmetric exponent matrix
/// `m(i, j) >= 2` (or infinite, meaning no relation between `a_i`, `a_j`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    n: u16,
    /// Upper-triangular storage, row-major over pairs `i < j`.
    m: Vec<MCoeff>,
}

impl GroupSpec {
    pub fn new(n: u16, entries: &[(u16, u16, MCoeff)]) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::GroupFile {
                line: 0,
                msg: "n must be at least 1".into(),
            });
        }
        let len = (n as usize) * (n as usize).saturating_sub(1) / 2;
        let mut spec = GroupSpec {
            n,
            m: vec![MCoeff::Infinite; len],
        };
        for &(i, j, c) in entries {
            spec.check_pair(i, j)?;
            if let MCoeff::Finite(m) = c {
                if m < 2 {
                    return Err(Error::GroupFile {
                        line: 0,
                        msg: format!("m({i},{j}) = {m} < 2"),
                    });
                }
            }
            let idx = spec.index(i, j);
            spec.m[idx] = c;
        }
        Ok(spec)
    }

    /// All pairs set to the same finite exponent.
    pub fn uniform(n: u16, m: u32) -> Self {
        let mut entries = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                entries.push((i, j, MCoeff::Finite(m)));
            }
        }
        GroupSpec::new(n, &entries).expect("uniform spec is well formed")
    }

    /// Free group: every pair infinite.
    pub fn free(n: u16) -> Self {
        GroupSpec::new(n, &[]).expect("free spec is well formed")
    }

    pub fn n(&self) -> u16 {
        self.n
    }

    fn check_pair(&self, i: u16, j: u16) -> Result<(), Error> {
        if i == 0 || i > self.n {
            return Err(Error::GeneratorOutOfRange(i, self.n));
        }
        if j == 0 || j > self.n {
            return Err(Error::GeneratorOutOfRange(j, self.n));
        }
        if i == j {
            return Err(Error::BadPair(i, j));
        }
        Ok(())
    }

    fn index(&self, i: u16, j: u16) -> usize {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let (lo, hi, n) = (lo as usize - 1, hi as usize - 1, self.n as usize);
        // Row lo keeps entries for columns lo+1..n.
        lo * n - lo * (lo + 1) / 2 + (hi - lo - 1)
    }

    /// Exponent for an unordered pair; symmetric in `i`, `j`.
    pub fn m(&self, i: u16, j: u16) -> Result<MCoeff, Error> {
        self.check_pair(i, j)?;
        Ok(self.m[self.index(i, j)])
    }

    /// All pairs `i < j` with a finite exponent.
    pub fn finite_pairs(&self) -> Vec<(u16, u16, u32)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                if let MCoeff::Finite(m) = self.m[self.index(i, j)] {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    /// Extra-large type: every finite exponent is at least 4.
    pub fn is_extra_large(&self) -> bool {
        self.finite_pairs().iter().all(|&(_, _, m)| m >= 4)
    }

    /// Every exponent (finite ones) is at least 7.
    pub fn is_theorem_scope(&self) -> bool {
        self.finite_pairs().iter().all(|&(_, _, m)| m >= 7)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), Error> {
        for s in w.syllables() {
            if s.gen == 0 || s.gen > self.n {
                return Err(Error::GeneratorOutOfRange(s.gen, self.n));
            }
        }
        Ok(())
    }

    /// Parses the line-oriented group file format:
    ///
    /// ```text
    /// # comment
    /// n 3
    /// m 1 2 7
    /// m 1 3 inf
    /// ```
    ///
    /// Unspecified pairs default to infinite. Re-specifying a pair (in
    /// either orientation) is an error, reported as conflicting when the
    /// values differ.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut n: Option<u16> = None;
        let mut entries: BTreeMap<(u16, u16), (MCoeff, usize)> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let fail = |msg: String| Error::GroupFile { line, msg };
            match toks[0] {
                "n" => {
                    if toks.len() != 2 {
                        return Err(fail("expected `n <count>`".into()));
                    }
                    if n.is_some() {
                        return Err(fail("duplicate n line".into()));
                    }
                    let v: u16 = toks[1]
                        .parse()
                        .map_err(|_| fail(format!("bad generator count `{}`", toks[1])))?;
                    if v == 0 {
                        return Err(fail("n must be at least 1".into()));
                    }
                    n = Some(v);
                }
                "m" => {
                    if toks.len() != 4 {
                        return Err(fail("expected `m <i> <j> <value>`".into()));
                    }
                    let i: u16 = toks[1]
                        .parse()
                        .map_err(|_| fail(format!("bad index `{}`", toks[1])))?;
                    let j: u16 = toks[2]
                        .parse()
                        .map_err(|_| fail(format!("bad index `{}`", toks[2])))?;
                    if i == 0 || j == 0 || i == j {
                        return Err(fail(format!("bad pair ({i}, {j})")));
                    }
                    let c = if toks[3] == "inf" {
                        MCoeff::Infinite
                    } else {
                        let v: u32 = toks[3]
                            .parse()
                            .map_err(|_| fail(format!("bad exponent `{}`", toks[3])))?;
                        if v < 2 {
                            return Err(fail(format!("m({i},{j}) = {v} < 2")));
                        }
                        MCoeff::Finite(v)
                    };
                    let key = (i.min(j), i.max(j));
                    if let Some(&(prev, prev_line)) = entries.get(&key) {
                        let what = if prev == c {
                            "duplicate"
                        } else {
                            "conflicting symmetric"
                        };
                        return Err(fail(format!(
                            "{what} entry for pair ({}, {}); first given on line {prev_line}",
                            key.0, key.1
                        )));
                    }
                    entries.insert(key, (c, line));
                }
                other => {
                    return Err(fail(format!("unknown directive `{other}`")));
                }
            }
        }
        let n = n.ok_or(Error::GroupFile {
            line: 0,
            msg: "missing `n` line".into(),
        })?;
        let list: Vec<(u16, u16, MCoeff)> =
            entries.iter().map(|(&(i, j), &(c, _))| (i, j, c)).collect();
        for &(i, j, _) in &list {
            if i > n || j > n {
                return Err(Error::GroupFile {
                    line: 0,
                    msg: format!("pair ({i}, {j}) exceeds n = {n}"),
                });
            }
        }
        GroupSpec::new(n, &list)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        assert_eq!(w("a1 a2 a2^-1 a1"), w("a1^2"));
        assert_eq!(w("a1 a1^-1"), Word::empty());
        assert_eq!(w("a1 a1"), w("a1^2"));
        assert_eq!(
            Word::from_letters([(1, 1), (2, 1), (2, -1), (1, 1)]),
            w("a1^2")
        );
    }

    #[test]
    fn lengths() {
        let word = w("a1^3 a2^-2 a1");
        assert_eq!(word.syll_len(), 3);
        assert_eq!(word.letter_len(), 6);
        assert_eq!(Word::empty().syll_len(), 0);
        assert_eq!(Word::empty().letter_len(), 0);
    }

    #[test]
    fn concat_cancels_across_boundary() {
        assert_eq!(w("a1 a2").concat(&w("a2^-1 a1")), w("a1^2"));
        assert_eq!(w("a1 a2").concat(&w("a2^-1 a1^-1")), Word::empty());
    }

    #[test]
    fn invert_reverses_and_negates() {
        assert_eq!(w("a1 a2^2").invert(), w("a2^-2 a1^-1"));
        assert_eq!(Word::empty().invert(), Word::empty());
    }

    #[test]
    fn subword_clip_boundary_exponents() {
        let word = w("a1^3 a2 a1^3");
        // Whole-syllable range.
        assert_eq!(word.subword(0..2), w("a1^3 a2"));
        // Split both boundary syllables: a1^2 a2 a1.
        assert_eq!(word.subword_clip(0, 1, 2, 2), w("a1^2 a2 a1"));
        // A subword inside a single syllable.
        assert_eq!(word.subword_clip(0, 1, 0, 0), w("a1^2"));
        assert_eq!(word.subword_clip(0, 0, 2, 0), word);
    }

    #[test]
    fn splice_clip_replaces_split_subword() {
        let word = w("a1^3 a2 a1^3");
        // Replace the middle `a1^2 a2 a1` (split boundaries) by a2^-1.
        let out = word.splice_clip(0, 1, 2, 2, &w("a2^-1"));
        assert_eq!(out, w("a1 a2^-1 a1^2"));
        // Replacement that cancels into the kept prefix.
        let out = word.splice_clip(0, 1, 2, 2, &w("a1^-1 a2"));
        assert_eq!(out, w("a2 a1^2"));
        // Identity splice: cutting a subword and pasting it back.
        let v = word.subword_clip(0, 1, 2, 2);
        assert_eq!(word.splice_clip(0, 1, 2, 2, &v), word);
    }

    #[test]
    fn cyclic_reduction() {
        let (c, core) = w("a1 a2 a1^-1").cyclic_reduce();
        assert_eq!(core, w("a2"));
        assert_eq!(c, w("a1"));
        assert!(w("a1 a2 a1").is_cyclically_reduced());
        assert!(w("a1^2 a2 a1^3").is_cyclically_reduced());
        let (c, core) = w("a1^3 a2 a1^-1").cyclic_reduce();
        assert_eq!(c, w("a1"));
        assert_eq!(core, w("a1^2 a2"));
        // Full collapse cascades.
        let (c, core) = w("a1 a2 a3 a2^-1 a1^-1").cyclic_reduce();
        assert_eq!(core, w("a3"));
        assert_eq!(c, w("a1 a2"));
    }

    #[test]
    fn word_token_roundtrip() {
        for text in ["1", "a1", "a3^-2", "a1^5 a2 a1^-1"] {
            let word = w(text);
            assert_eq!(Word::parse(&word.token_string().replace('.', " ")).unwrap(), word);
        }
        assert!(Word::parse("b2").is_err());
        assert!(Word::parse("a0").is_err());
        assert!(Word::parse("a2^0").is_err());
    }

    #[test]
    fn shortlex_examples() {
        use std::cmp::Ordering::*;
        assert_eq!(w("a1").shortlex_cmp(&w("a2")), Less);
        assert_eq!(w("a1").shortlex_cmp(&w("a1^-1")), Less);
        assert_eq!(w("a2").shortlex_cmp(&w("a1 a2")), Less);
        assert_eq!(w("a1 a2").shortlex_cmp(&w("a1 a2")), Equal);
    }

    #[test]
    fn group_file_parses_default_spec() {
        let text = "# three generators, all exponents 7\nn 3\nm 1 2 7\nm 1 3 7\nm 2 3 7\n";
        let spec = GroupSpec::parse(text).unwrap();
        assert_eq!(spec.n(), 3);
        assert_eq!(spec.m(1, 2).unwrap(), MCoeff::Finite(7));
        assert_eq!(spec.m(2, 1).unwrap(), MCoeff::Finite(7));
        assert!(spec.is_extra_large());
        assert!(spec.is_theorem_scope());
    }

    #[test]
    fn group_file_defaults_and_small_m() {
        let spec = GroupSpec::parse("n 3\nm 1 2 3\n").unwrap();
        assert_eq!(spec.m(1, 3).unwrap(), MCoeff::Infinite);
        assert!(!spec.is_extra_large());
        assert!(!spec.is_theorem_scope());
        // All-infinite: vacuously both.
        assert!(GroupSpec::free(2).is_extra_large());
        assert!(GroupSpec::free(2).is_theorem_scope());
    }

    #[test]
    fn group_file_errors() {
        let err = GroupSpec::parse("n 3\nm 1 2 7\nm 2 1 8\n").unwrap_err();
        match err {
            Error::GroupFile { line, ref msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("conflicting"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(GroupSpec::parse("n 3\nm 1 2 1\n").is_err());
        assert!(GroupSpec::parse("n 3\nm 1 1 4\n").is_err());
        assert!(GroupSpec::parse("n 3\nq 1\n").is_err());
        assert!(GroupSpec::parse("m 1 2 4\n").is_err());
        assert!(GroupSpec::parse("n 2\nm 1 3 4\n").is_err());
        let err = GroupSpec::parse("n 2\nm 1 2 x\n").unwrap_err();
        match err {
            Error::GroupFile { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spec_matrix_indexing_covers_all_pairs() {
        let spec = GroupSpec::parse("n 4\nm 1 2 7\nm 3 4 9\n").unwrap();
        assert_eq!(spec.m(3, 4).unwrap(), MCoeff::Finite(9));
        assert_eq!(spec.m(4, 3).unwrap(), MCoeff::Finite(9));
        assert_eq!(spec.m(2, 3).unwrap(), MCoeff::Infinite);
        assert_eq!(
            spec.finite_pairs(),
            vec![(1, 2, 7), (3, 4, 9)]
        );
    }

    fn arb_word(n: u16, max_letters: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((1..=n, prop::bool::ANY), 0..max_letters)
            .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 }))))
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(word in arb_word(3, 24)) {
            let again = Word::from_syllables(word.syllables().iter().copied());
            prop_assert_eq!(&again, &word);
            for pair in word.syllables().windows(2) {
                prop_assert_ne!(pair[0].gen, pair[1].gen);
            }
            for s in word.syllables() {
                prop_assert_ne!(s.exp, 0);
            }
        }

        #[test]
        fn word_times_inverse_is_trivial(word in arb_word(3, 24)) {
            prop_assert!(word.concat(&word.invert()).is_empty());
            prop_assert!(word.invert().concat(&word).is_empty());
        }

        #[test]
        fn concat_length_subadditive(a in arb_word(3, 16), b in arb_word(3, 16)) {
            let c = a.concat(&b);
            prop_assert!(c.letter_len() <= a.letter_len() + b.letter_len());
            prop_assert!(c.syll_len() <= a.syll_len() + b.syll_len());
        }

        #[test]
        fn cyclic_core_is_cyclically_reduced(word in arb_word(3, 24)) {
            let (c, core) = word.cyclic_reduce();
            prop_assert!(core.is_cyclically_reduced());
            let back = c.concat(&core).concat(&c.invert());
            prop_assert_eq!(back, word);
        }
    }
}
