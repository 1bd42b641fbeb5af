//! Two-generator Artin groups `G = <a, b | u = u'>` where `u = abab...` and
//! `u' = baba...` each have `m` letters.
//!
//! The module solves the word problem twice, by independent routes:
//!
//! - [`DihedralPair::garside_nf`]: the left-greedy Garside normal form
//!   `delta^p s_1 ... s_l` over the 2m simple elements (alternating
//!   positive words of length 0..=m, both length-m words being the Garside
//!   element `delta`).
//! - [`DihedralPair::amalgam_nf`]: a normal form through the central
//!   quotient. For odd m = 2k+1 the group is `<x, y | x^2 = y^m>` via
//!   `x = u`, `y = ab` (inverse `a = y^-k x`, `b = x^-1 y^(k+1)`), with
//!   `x^2` central and quotient `Z_2 * Z_m`. For even m = 2k it is
//!   `<x, y | y^-1 x^k y = x^k>` via `x = ab`, `y = a` (inverse `a = y`,
//!   `b = y^-1 x`), with `x^k` central and quotient `Z_k * Z`. An element
//!   is recorded as a central exponent plus the reduced alternating
//!   syllable sequence of its quotient image; two elements are equal iff
//!   these records coincide.
//!
//! On top of the oracles sit syllable-minimal rewriting
//! ([`DihedralPair::min_syllable_rep`]), membership in the set of
//! cyclically reduced trivial words ([`DihedralPair::in_rij`]), and the
//! relator-completion search ([`DihedralPair::relator_completion`]) that
//! drives Dehn-style reduction in the full group.

use crate::words::{Error, GroupSpec, Syllable, Word};
use smallvec::SmallVec;
use std::collections::HashMap;

/// A generator pair with finite exponent; `i` and `j` are global 1-based
/// generator indices and `m >= 2` is the pair's exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DihedralPair {
    pub i: u16,
    pub j: u16,
    pub m: u32,
}

/// A simple element: an alternating positive word of length `0..=m` in the
/// two local letters. `start` is the first local letter; words of length 0
/// and m are canonicalized to `start = 0` (both length-m words equal the
/// Garside element).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simple {
    pub start: u8,
    pub len: u32,
}

impl Simple {
    fn canon(start: u8, len: u32, m: u32) -> Simple {
        if len == 0 || len == m {
            Simple { start: 0, len }
        } else {
            Simple { start, len }
        }
    }

    pub fn identity() -> Simple {
        Simple { start: 0, len: 0 }
    }

    fn end(&self) -> u8 {
        debug_assert!(self.len >= 1);
        if self.len % 2 == 1 {
            self.start
        } else {
            1 - self.start
        }
    }

    /// The local letter that extends the alternating word by one.
    fn next_letter(&self) -> u8 {
        1 - self.end()
    }

    fn with_end(end: u8, len: u32, m: u32) -> Simple {
        debug_assert!(len >= 1);
        let start = if len % 2 == 1 { end } else { 1 - end };
        Simple::canon(start, len, m)
    }

    /// Local letters of the simple; for the Garside element the canonical
    /// `start = 0` spelling is produced.
    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |t| ((self.start as u32 + t) % 2) as u8)
    }
}

/// Left-greedy Garside normal form `delta^inf s_1 ... s_l` with every
/// factor a proper nontrivial simple and every adjacent pair left-weighted.
/// Two words are equal in the group iff their normal forms are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GarsideNf {
    pub m: u32,
    pub inf: i64,
    pub factors: SmallVec<[Simple; 8]>,
}

impl GarsideNf {
    pub fn identity(m: u32) -> GarsideNf {
        GarsideNf {
            m,
            inf: 0,
            factors: SmallVec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// Canonical length: number of greedy factors.
    pub fn canonical_len(&self) -> usize {
        self.factors.len()
    }

    /// Conjugation by delta sends each factor to its mirror when m is odd
    /// and fixes it when m is even.
    fn tau_all(&mut self) {
        if self.m % 2 == 1 {
            for f in self.factors.iter_mut() {
                f.start = 1 - f.start;
            }
        }
    }

    /// Moves letters from the front of `t` onto the end of `s` while `s`
    /// stays simple and the moved letter keeps both words alternating.
    /// Afterwards either `s` is the Garside element or the pair `(s, t)` is
    /// left-weighted.
    fn slide(s: &mut Simple, t: &mut Simple, m: u32) {
        debug_assert!(s.len >= 1);
        while s.len < m && t.len > 0 {
            let need = s.next_letter();
            if t.len == m {
                // The Garside element can present either letter first.
                *s = Simple::canon(s.start, s.len + 1, m);
                *t = Simple::canon(1 - need, m - 1, m);
            } else if t.start == need {
                *s = Simple::canon(s.start, s.len + 1, m);
                *t = Simple::canon(1 - t.start, t.len - 1, m);
            } else {
                break;
            }
        }
    }

    fn append_simple(&mut self, mut t: Simple) {
        loop {
            if t.len == 0 {
                return;
            }
            if t.len == self.m {
                self.inf += 1;
                self.tau_all();
                return;
            }
            match self.factors.last_mut() {
                None => {
                    self.factors.push(t);
                    return;
                }
                Some(s) => {
                    Self::slide(s, &mut t, self.m);
                    if s.len == self.m {
                        self.factors.pop();
                        self.tau_all();
                        self.inf += 1;
                        // Re-examine the remainder against the new last factor.
                    } else {
                        if t.len > 0 {
                            self.factors.push(t);
                        }
                        return;
                    }
                }
            }
        }
    }

    /// Right-multiplies by one local letter with the given sign.
    pub fn push_letter(&mut self, letter: u8, sign: i64) {
        debug_assert!(letter < 2 && (sign == 1 || sign == -1));
        if sign > 0 {
            self.append_simple(Simple::canon(letter, 1, self.m));
        } else {
            // x^-1 = delta^-1 c with c x = delta; moving delta^-1 to the
            // front conjugates every factor by delta.
            self.inf -= 1;
            self.tau_all();
            let c = Simple::with_end(1 - letter, self.m - 1, self.m);
            self.append_simple(c);
        }
    }

    pub fn push_local(&mut self, letter: u8, exp: i64) {
        let sign = exp.signum();
        for _ in 0..exp.unsigned_abs() {
            self.push_letter(letter, sign);
        }
    }
}

const TAG_X: u8 = 0;
const TAG_Y: u8 = 1;

/// Amalgam normal form: central exponent plus the reduced syllable word of
/// the image in the central quotient (`Z_2 * Z_m` for odd m, `Z_k * Z` for
/// even m = 2k). Syllables are `(tag, value)` with tag 0 for the x-class
/// and tag 1 for the y-class; values are canonical residues (x: `1..2`
/// odd / `1..k` even; y: `1..m` odd, any nonzero integer even).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmalgamNf {
    pub m: u32,
    pub central: i64,
    pub sylls: Vec<(u8, i64)>,
}

impl AmalgamNf {
    pub fn is_trivial(&self) -> bool {
        self.central == 0 && self.sylls.is_empty()
    }
}

/// Incremental word-problem state: maintains the Garside normal form and
/// the amalgam reduction of a growing syllable word, with O(1) undo of the
/// last syllable. Used by exhaustive scans that walk a tree of words.
pub struct DihedralScanState {
    m: u32,
    k: u32,
    even: bool,
    nf_stack: Vec<GarsideNf>,
    spare: Vec<GarsideNf>,
    am_stack: Vec<(u8, i64)>,
    x_total: i64,
    y_total: i64,
    res_x: i64,
    res_y: i64,
    journal: Vec<AmOp>,
    marks: Vec<AmMark>,
}

enum AmOp {
    Push,
    SetTop { old: i64 },
    Pop { tag: u8, amt: i64 },
}

struct AmMark {
    journal_len: usize,
    x_total: i64,
    y_total: i64,
    res_x: i64,
    res_y: i64,
}

impl DihedralScanState {
    pub fn new(m: u32) -> DihedralScanState {
        DihedralScanState {
            m,
            k: m / 2,
            even: m % 2 == 0,
            nf_stack: vec![GarsideNf::identity(m)],
            spare: Vec::new(),
            am_stack: Vec::new(),
            x_total: 0,
            y_total: 0,
            res_x: 0,
            res_y: 0,
            journal: Vec::new(),
            marks: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.nf_stack.len() - 1
    }

    fn norm(&self, tag: u8, amt: i64) -> i64 {
        let modulus = if tag == TAG_X {
            if self.even {
                self.k as i64
            } else {
                2
            }
        } else if self.even {
            0
        } else {
            self.m as i64
        };
        if modulus == 0 {
            amt
        } else {
            amt.rem_euclid(modulus)
        }
    }

    fn push_atom(&mut self, tag: u8, raw: i64) {
        if tag == TAG_X {
            self.x_total += raw;
        } else {
            self.y_total += raw;
        }
        let amt = self.norm(tag, raw);
        if amt == 0 {
            return;
        }
        match self.am_stack.last_mut() {
            Some(&mut (ttag, told)) if ttag == tag => {
                let new = self.norm(tag, told + amt);
                if new == 0 {
                    self.am_stack.pop();
                    if tag == TAG_X {
                        self.res_x -= told;
                    } else {
                        self.res_y -= told;
                    }
                    self.journal.push(AmOp::Pop { tag, amt: told });
                } else {
                    self.am_stack.last_mut().unwrap().1 = new;
                    if tag == TAG_X {
                        self.res_x += new - told;
                    } else {
                        self.res_y += new - told;
                    }
                    self.journal.push(AmOp::SetTop { old: told });
                }
            }
            _ => {
                self.am_stack.push((tag, amt));
                if tag == TAG_X {
                    self.res_x += amt;
                } else {
                    self.res_y += amt;
                }
                self.journal.push(AmOp::Push);
            }
        }
    }

    fn emit_letter(&mut self, letter: u8, sign: i64) {
        let k = self.k as i64;
        if self.even {
            // a = y, b = y^-1 x.
            match (letter, sign > 0) {
                (0, true) => self.push_atom(TAG_Y, 1),
                (0, false) => self.push_atom(TAG_Y, -1),
                (1, true) => {
                    self.push_atom(TAG_Y, -1);
                    self.push_atom(TAG_X, 1);
                }
                (1, false) => {
                    self.push_atom(TAG_X, -1);
                    self.push_atom(TAG_Y, 1);
                }
                _ => unreachable!(),
            }
        } else {
            // a = y^-k x, b = x^-1 y^(k+1).
            match (letter, sign > 0) {
                (0, true) => {
                    self.push_atom(TAG_Y, -k);
                    self.push_atom(TAG_X, 1);
                }
                (0, false) => {
                    self.push_atom(TAG_X, -1);
                    self.push_atom(TAG_Y, k);
                }
                (1, true) => {
                    self.push_atom(TAG_X, -1);
                    self.push_atom(TAG_Y, k + 1);
                }
                (1, false) => {
                    self.push_atom(TAG_Y, -k - 1);
                    self.push_atom(TAG_X, 1);
                }
                _ => unreachable!(),
            }
        }
    }

    /// Appends one syllable `letter^exp`; the caller is responsible for
    /// alternation with the previous syllable.
    pub fn push_syllable(&mut self, letter: u8, exp: i64) {
        debug_assert!(letter < 2 && exp != 0);
        self.marks.push(AmMark {
            journal_len: self.journal.len(),
            x_total: self.x_total,
            y_total: self.y_total,
            res_x: self.res_x,
            res_y: self.res_y,
        });
        let mut nf = self
            .spare
            .pop()
            .unwrap_or_else(|| GarsideNf::identity(self.m));
        nf.clone_from(self.nf_stack.last().unwrap());
        nf.push_local(letter, exp);
        self.nf_stack.push(nf);
        let sign = exp.signum();
        for _ in 0..exp.unsigned_abs() {
            self.emit_letter(letter, sign);
        }
    }

    pub fn pop_syllable(&mut self) {
        let mark = self.marks.pop().expect("pop without matching push");
        while self.journal.len() > mark.journal_len {
            match self.journal.pop().unwrap() {
                AmOp::Push => {
                    self.am_stack.pop();
                }
                AmOp::SetTop { old } => {
                    self.am_stack.last_mut().unwrap().1 = old;
                }
                AmOp::Pop { tag, amt } => {
                    self.am_stack.push((tag, amt));
                }
            }
        }
        self.x_total = mark.x_total;
        self.y_total = mark.y_total;
        self.res_x = mark.res_x;
        self.res_y = mark.res_y;
        let nf = self.nf_stack.pop().expect("state underflow");
        self.spare.push(nf);
    }

    pub fn garside_trivial(&self) -> bool {
        self.nf_stack.last().unwrap().is_trivial()
    }

    fn central(&self) -> i64 {
        if self.even {
            if self.k == 0 {
                0
            } else {
                let num = self.x_total - self.res_x;
                debug_assert_eq!(num % self.k as i64, 0);
                num / self.k as i64
            }
        } else {
            let m = self.m as i64;
            let num = m * self.x_total + 2 * self.y_total - (m * self.res_x + 2 * self.res_y);
            debug_assert_eq!(num % (2 * m), 0);
            num / (2 * m)
        }
    }

    pub fn amalgam_trivial(&self) -> bool {
        self.am_stack.is_empty() && self.central() == 0
    }

    pub fn garside(&self) -> &GarsideNf {
        self.nf_stack.last().unwrap()
    }

    pub fn amalgam(&self) -> AmalgamNf {
        AmalgamNf {
            m: self.m,
            central: self.central(),
            sylls: self.am_stack.clone(),
        }
    }
}

/// Search bounds for syllable-minimal rewriting: maximum candidate
/// syllable count and maximum per-syllable exponent magnitude. `None`
/// fields take the defaults `||w||` and `letter_len(w) + 2m`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchBounds {
    pub max_syllables: Option<usize>,
    pub max_exp: Option<u64>,
}

/// Whether a syllable-minimal search certified global minimality or only
/// minimality within its exponent bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinSyllStatus {
    Exhaustive,
    Bounded,
}

#[derive(Debug, Clone)]
pub struct MinSyllResult {
    pub word: Word,
    pub status: MinSyllStatus,
}

/// A completion of a word `v` to a cyclically reduced trivial word
/// `r = v u` by a short tail `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub u: Word,
    pub relator: Word,
}

impl DihedralPair {
    pub fn new(i: u16, j: u16, m: u32) -> Result<DihedralPair, Error> {
        if i == j || i == 0 || j == 0 {
            return Err(Error::BadPair(i, j));
        }
        if m < 2 {
            return Err(Error::GroupFile {
                line: 0,
                msg: format!("m({i},{j}) = {m} < 2"),
            });
        }
        Ok(DihedralPair { i, j, m })
    }

    pub fn from_spec(spec: &GroupSpec, i: u16, j: u16) -> Result<DihedralPair, Error> {
        match spec.m(i, j)? {
            crate::words::MCoeff::Finite(m) => DihedralPair::new(i, j, m),
            crate::words::MCoeff::Infinite => Err(Error::InfinitePair(i, j)),
        }
    }

    pub fn local(&self, gen: u16) -> Option<u8> {
        if gen == self.i {
            Some(0)
        } else if gen == self.j {
            Some(1)
        } else {
            None
        }
    }

    pub fn global(&self, letter: u8) -> u16 {
        if letter == 0 {
            self.i
        } else {
            self.j
        }
    }

    /// Converts a word into local `(letter, exp)` syllables; errors on
    /// generators outside the pair.
    pub fn local_sylls(&self, w: &Word) -> Result<Vec<(u8, i64)>, Error> {
        w.syllables()
            .iter()
            .map(|s| {
                self.local(s.gen)
                    .map(|l| (l, s.exp))
                    .ok_or(Error::ForeignGenerator(s.gen))
            })
            .collect()
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.syllables().iter().all(|s| self.local(s.gen).is_some())
    }

    /// Alternating positive word of the given length starting with the
    /// given local letter.
    pub fn alternating(&self, start: u8, len: u32) -> Word {
        Word::from_syllables(
            (0..len).map(|t| Syllable::new(self.global(((start as u32 + t) % 2) as u8), 1)),
        )
    }

    /// The defining relator `u u'^-1` where `u = a_i a_j ...` and
    /// `u' = a_j a_i ...` each have m letters.
    pub fn relator(&self) -> Word {
        self.alternating(0, self.m)
            .concat(&self.alternating(1, self.m).invert())
    }

    /// The Garside element as a word (the `a_i`-first spelling).
    pub fn delta_word(&self) -> Word {
        self.alternating(0, self.m)
    }

    /// All 2m simple elements, ordered by (length, start letter).
    pub fn simples(&self) -> Vec<Simple> {
        let mut out = vec![Simple::identity()];
        for len in 1..self.m {
            out.push(Simple::canon(0, len, self.m));
            out.push(Simple::canon(1, len, self.m));
        }
        out.push(Simple::canon(0, self.m, self.m));
        out
    }

    /// Right complement: the simple `c` with `s c = delta`.
    pub fn right_complement(&self, s: Simple) -> Simple {
        if s.len == 0 {
            return Simple::canon(0, self.m, self.m);
        }
        if s.len == self.m {
            return Simple::identity();
        }
        Simple::canon(1 - s.end(), self.m - s.len, self.m)
    }

    pub fn simple_word(&self, s: Simple) -> Word {
        Word::from_syllables(s.letters().map(|l| Syllable::new(self.global(l), 1)))
    }

    pub fn garside_nf(&self, w: &Word) -> Result<GarsideNf, Error> {
        let sylls = self.local_sylls(w)?;
        let mut nf = GarsideNf::identity(self.m);
        for (letter, exp) in sylls {
            nf.push_local(letter, exp);
        }
        Ok(nf)
    }

    pub fn garside_trivial(&self, w: &Word) -> Result<bool, Error> {
        Ok(self.garside_nf(w)?.is_trivial())
    }

    /// Reconstructs a word (delta powers then factor spellings) whose
    /// normal form is `nf`.
    pub fn canonical_word(&self, nf: &GarsideNf) -> Word {
        let mut w = self.delta_word().pow(nf.inf);
        for f in &nf.factors {
            w = w.concat(&self.simple_word(*f));
        }
        w
    }

    pub fn amalgam_nf(&self, w: &Word) -> Result<AmalgamNf, Error> {
        let sylls = self.local_sylls(w)?;
        let mut st = DihedralScanState::new(self.m);
        for (letter, exp) in sylls {
            st.push_syllable(letter, exp);
        }
        Ok(st.amalgam())
    }

    pub fn amalgam_trivial(&self, w: &Word) -> Result<bool, Error> {
        Ok(self.amalgam_nf(w)?.is_trivial())
    }

    /// Both oracles must agree; panics on disagreement (an oracle bug).
    pub fn is_trivial_checked(&self, w: &Word) -> Result<bool, Error> {
        let g = self.garside_trivial(w)?;
        let a = self.amalgam_trivial(w)?;
        assert_eq!(g, a, "oracle disagreement on {w}");
        Ok(g)
    }

    /// Membership in the set of nonempty cyclically reduced words that are
    /// trivial in the pair group.
    pub fn in_rij(&self, w: &Word) -> Result<bool, Error> {
        if !self.contains_word(w) {
            return Err(Error::ForeignGenerator(
                w.syllables()
                    .iter()
                    .find(|s| self.local(s.gen).is_none())
                    .map(|s| s.gen)
                    .unwrap_or(0),
            ));
        }
        Ok(!w.is_empty() && w.is_cyclically_reduced() && self.garside_nf(w)?.is_trivial())
    }

    fn word_from_local(&self, sylls: &[(u8, i64)]) -> Word {
        Word::from_syllables(
            sylls
                .iter()
                .map(|&(l, e)| Syllable::new(self.global(l), e)),
        )
    }

    /// Minimal-syllable-length representative of `w`, by search ordered by
    /// (syllable count, letter length, shortlex). The result is flagged
    /// `Exhaustive` only when minimality is certified: either the
    /// short-word regime applies (`||w|| <= m`, where any competing
    /// representative of at most as many syllables would force a
    /// cyclically reduced trivial word of syllable length below 2m, which
    /// does not exist), or every level below the found length was pinned
    /// exactly by exponent sums.
    pub fn min_syllable_rep(&self, w: &Word, bounds: SearchBounds) -> Result<MinSyllResult, Error> {
        let sylls = self.local_sylls(w)?;
        if w.is_empty() {
            return Ok(MinSyllResult {
                word: Word::empty(),
                status: MinSyllStatus::Exhaustive,
            });
        }
        if (w.syll_len() as u32) < self.m {
            return Ok(MinSyllResult {
                word: w.clone(),
                status: MinSyllStatus::Exhaustive,
            });
        }
        let max_s = bounds.max_syllables.unwrap_or(w.syll_len()).min(w.syll_len());
        let bound = bounds
            .max_exp
            .unwrap_or(w.letter_len() + 2 * self.m as u64) as i64;
        let target = self.garside_nf(w)?;
        if target.is_trivial() {
            return Ok(MinSyllResult {
                word: Word::empty(),
                status: MinSyllStatus::Exhaustive,
            });
        }
        fn better(cand: &Word, best: &Option<Word>) -> bool {
            match best {
                None => true,
                Some(b) => {
                    cand.letter_len() < b.letter_len()
                        || (cand.letter_len() == b.letter_len()
                            && cand.shortlex_cmp(b) == std::cmp::Ordering::Less)
                }
            }
        }
        if (w.syll_len() as u32) == self.m {
            // No shorter representative exists, and a word with one letter
            // per syllable is letter-minimal outright. Otherwise search
            // the level for a lighter spelling without a global claim.
            if w.letter_len() == w.syll_len() as u64 {
                return Ok(MinSyllResult {
                    word: w.clone(),
                    status: MinSyllStatus::Exhaustive,
                });
            }
            let s = w.syll_len();
            let mut best: Option<Word> = Some(w.clone());
            let e0: i64 = sylls.iter().filter(|s| s.0 == 0).map(|s| s.1).sum();
            let e1: i64 = sylls.iter().filter(|s| s.0 == 1).map(|s| s.1).sum();
            if s <= 3 {
                self.level_direct(&target, s, bound, e0, e1, e0 + e1, &mut |cand| {
                    if better(&cand, &best) {
                        best = Some(cand);
                    }
                })?;
            } else {
                self.level_mitm(&target, w, s, bound, &mut |cand| {
                    if better(&cand, &best) {
                        best = Some(cand);
                    }
                })?;
            }
            return Ok(MinSyllResult {
                word: best.unwrap(),
                status: MinSyllStatus::Bounded,
            });
        }
        let even = self.m % 2 == 0;
        // Exponent sums pin level-1 candidates exactly (and level-2 for
        // even m); track whether the pinned values fit the bound so the
        // exhaustiveness claim stays honest under caller-shrunk bounds.
        let e0: i64 = sylls.iter().filter(|s| s.0 == 0).map(|s| s.1).sum();
        let e1: i64 = sylls.iter().filter(|s| s.0 == 1).map(|s| s.1).sum();
        let total = e0 + e1;
        let mut level_complete = vec![false; max_s + 1];
        level_complete[0] = true;
        let mut best: Option<Word> = None;
        // Level 1: candidates pinned by exponent sums.
        if max_s >= 1 {
            let mut pinned_fit = true;
            let mut cands: Vec<(u8, i64)> = Vec::new();
            if even {
                if e1 == 0 && e0 != 0 {
                    cands.push((0, e0));
                }
                if e0 == 0 && e1 != 0 {
                    cands.push((1, e1));
                }
            } else if total != 0 {
                cands.push((0, total));
                cands.push((1, total));
            }
            for (l, e) in cands {
                if e.abs() > bound {
                    pinned_fit = false;
                }
                let cand = self.word_from_local(&[(l, e)]);
                if self.garside_nf(&cand)? == target && better(&cand, &best) {
                    best = Some(cand);
                }
            }
            level_complete[1] = pinned_fit;
            if let Some(word) = best {
                return Ok(MinSyllResult {
                    word,
                    status: MinSyllStatus::Exhaustive,
                });
            }
        }
        // Levels >= 2.
        for s in 2..=max_s {
            if s <= 3 {
                let complete = self.level_direct(&target, s, bound, e0, e1, total, &mut |cand| {
                    if better(&cand, &best) {
                        best = Some(cand);
                    }
                })?;
                level_complete[s] = complete;
            } else {
                self.level_mitm(&target, w, s, bound, &mut |cand| {
                    if better(&cand, &best) {
                        best = Some(cand);
                    }
                })?;
            }
            if s == w.syll_len() && better(w, &best) {
                best = Some(w.clone());
            }
            if let Some(word) = best {
                let status = if (0..s).all(|t| level_complete[t]) {
                    MinSyllStatus::Exhaustive
                } else {
                    MinSyllStatus::Bounded
                };
                return Ok(MinSyllResult { word, status });
            }
        }
        // No representative within max_s syllables was found (reachable
        // only when the caller capped max_syllables below ||w||).
        Ok(MinSyllResult {
            word: w.clone(),
            status: MinSyllStatus::Bounded,
        })
    }

    /// Direct enumeration of level-`s` candidates (s <= 3) with the last
    /// occurrence of each pinnable generator solved from exponent sums.
    /// Returns whether the level was provably complete.
    fn level_direct(
        &self,
        target: &GarsideNf,
        s: usize,
        bound: i64,
        e0: i64,
        e1: i64,
        total: i64,
        consider: &mut impl FnMut(Word),
    ) -> Result<bool, Error> {
        let even = self.m % 2 == 0;
        let mut complete = even && s == 2;
        let mut pinned_overflow = false;
        for start in 0..2u8 {
            let pattern: Vec<u8> = (0..s).map(|t| ((start as usize + t) % 2) as u8).collect();
            // Free positions: all but the pinned ones.
            let pinned_idx: Vec<usize> = if even {
                // Last occurrence of each letter is solved.
                let mut idx = Vec::new();
                for l in 0..2u8 {
                    if let Some(p) = pattern.iter().rposition(|&x| x == l) {
                        idx.push(p);
                    }
                }
                idx.sort_unstable();
                idx
            } else {
                vec![s - 1]
            };
            let free_idx: Vec<usize> = (0..s).filter(|p| !pinned_idx.contains(p)).collect();
            let mut exps = vec![0i64; s];
            if free_idx.is_empty() {
                // Fully pinned pattern: at most one candidate.
                let mut ok = true;
                for &p in &pinned_idx {
                    let l = pattern[p];
                    let want = if even {
                        if l == 0 {
                            e0
                        } else {
                            e1
                        }
                    } else {
                        total
                    };
                    if want == 0 {
                        ok = false;
                    } else if want.abs() > bound {
                        pinned_overflow = true;
                        ok = false;
                    } else {
                        exps[p] = want;
                    }
                }
                if ok {
                    let cand = self.word_from_local(
                        &pattern
                            .iter()
                            .zip(exps.iter())
                            .map(|(&l, &e)| (l, e))
                            .collect::<Vec<_>>(),
                    );
                    if cand.syll_len() == s && self.garside_nf(&cand)? == *target {
                        consider(cand);
                    }
                }
                continue;
            }
            let mut stack = vec![-bound];
            'outer: loop {
                let depth = stack.len() - 1;
                let val = stack[depth];
                if val > bound {
                    stack.pop();
                    if stack.is_empty() {
                        break;
                    }
                    let d = stack.len() - 1;
                    stack[d] += 1;
                    continue;
                }
                if val == 0 {
                    stack[depth] += 1;
                    continue;
                }
                exps[free_idx[depth]] = val;
                if depth + 1 < free_idx.len() {
                    stack.push(-bound);
                    continue;
                }
                // Solve pinned positions.
                for &p in &pinned_idx {
                    let l = pattern[p];
                    let want = if even {
                        if l == 0 {
                            e0
                        } else {
                            e1
                        }
                    } else {
                        total
                    };
                    let others: i64 = (0..s)
                        .filter(|&q| q != p && (!even || pattern[q] == l))
                        .map(|q| exps[q])
                        .sum();
                    let need = want - others;
                    if need == 0 {
                        stack[depth] += 1;
                        continue 'outer;
                    }
                    if need.abs() > bound {
                        pinned_overflow = true;
                        stack[depth] += 1;
                        continue 'outer;
                    }
                    exps[p] = need;
                }
                let cand = self.word_from_local(
                    &pattern
                        .iter()
                        .zip(exps.iter())
                        .map(|(&l, &e)| (l, e))
                        .collect::<Vec<_>>(),
                );
                if cand.syll_len() == s && self.garside_nf(&cand)? == *target {
                    consider(cand);
                }
                stack[depth] += 1;
            }
        }
        if pinned_overflow {
            complete = false;
        }
        Ok(complete)
    }

    /// Meet-in-the-middle enumeration for levels >= 4: left halves are
    /// keyed by normal form, right halves walk `NF(w z)` incrementally and
    /// join on `NF(u) == NF(w z)`, which says `u z^-1 = w`.
    fn level_mitm(
        &self,
        _target: &GarsideNf,
        w: &Word,
        s: usize,
        bound: i64,
        consider: &mut impl FnMut(Word),
    ) -> Result<(), Error> {
        let l_len = s / 2;
        let r_len = s - l_len;
        // Left map: NF(u) -> best u (letters, shortlex), plus u's last letter.
        let mut map: HashMap<GarsideNf, Word> = HashMap::new();
        for start in 0..2u8 {
            let mut sylls: Vec<(u8, i64)> = Vec::new();
            let mut nfs = vec![GarsideNf::identity(self.m)];
            self.mitm_dfs(start, l_len, bound, &mut sylls, &mut nfs, &mut |sylls, nf| {
                let u = self.word_from_local(sylls);
                match map.entry(nf.clone()) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(u);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let cur = e.get();
                        if u.letter_len() < cur.letter_len()
                            || (u.letter_len() == cur.letter_len()
                                && u.shortlex_cmp(cur) == std::cmp::Ordering::Less)
                        {
                            e.insert(u);
                        }
                    }
                }
            });
        }
        // Right side: enumerate z of length r_len; v = z^-1.
        let base = self.garside_nf(w)?;
        for start in 0..2u8 {
            let mut sylls: Vec<(u8, i64)> = Vec::new();
            let mut nfs = vec![base.clone()];
            self.mitm_dfs(start, r_len, bound, &mut sylls, &mut nfs, &mut |sylls, nf| {
                if let Some(u) = map.get(nf) {
                    let v = self.word_from_local(sylls).invert();
                    // Clean join: no syllable merge between u and v.
                    let ul = u.syllables().last().unwrap().gen;
                    let vf = v.syllables().first().unwrap().gen;
                    if ul != vf {
                        consider(u.concat(&v));
                    }
                }
            });
        }
        Ok(())
    }

    fn mitm_dfs(
        &self,
        start: u8,
        len: usize,
        bound: i64,
        sylls: &mut Vec<(u8, i64)>,
        nfs: &mut Vec<GarsideNf>,
        leaf: &mut impl FnMut(&[(u8, i64)], &GarsideNf),
    ) {
        if sylls.len() == len {
            leaf(sylls, nfs.last().unwrap());
            return;
        }
        let letter = ((start as usize + sylls.len()) % 2) as u8;
        for e in (-bound..=bound).filter(|&e| e != 0) {
            let mut nf = nfs.last().unwrap().clone();
            nf.push_local(letter, e);
            nfs.push(nf);
            sylls.push((letter, e));
            self.mitm_dfs(start, len, bound, sylls, nfs, leaf);
            sylls.pop();
            nfs.pop();
        }
    }

    /// Searches for a tail `u` with at most `k` syllables such that
    /// `r = v u` is a nonempty cyclically reduced word trivial in the pair
    /// group. Candidates are enumerated by (syllable count, letter length,
    /// shortlex); per-syllable exponents are bounded by
    /// `letter_len(v) + m` unless overridden. Returns the first (minimal)
    /// completion.
    pub fn relator_completion(
        &self,
        v: &Word,
        k: u32,
        exp_bound: Option<u64>,
    ) -> Result<Option<Completion>, Error> {
        let v_sylls = self.local_sylls(v)?;
        if v.is_empty() {
            return Ok(None);
        }
        // Even with maximal merging r cannot reach 2m syllables, and a
        // cyclically reduced trivial word has at least 2m of them.
        let two_m = 2 * self.m as usize;
        if v.syll_len() + (k as usize) < two_m {
            return Ok(None);
        }
        let mut bound = exp_bound.unwrap_or(v.letter_len() + self.m as u64) as i64;
        let nf_v = self.garside_nf(v)?;
        if self.m % 2 == 1 {
            // Odd m: any completion's image has one quotient syllable per
            // letter, junction cancellation is at most three syllables, so
            // exponents beyond |image(v)|/2 + 4m cannot occur. Interior
            // syllables of a short word's image carry residues k or k+1;
            // reject targets with too many other values.
            let am_v = self.amalgam_nf(v)?;
            let lq = am_v.sylls.len() as i64;
            bound = bound.min(lq / 2 + 4 * self.m as i64 + 8);
            let kk = (self.m / 2) as i64;
            let irregular = am_v
                .sylls
                .iter()
                .filter(|&&(tag, val)| tag == TAG_Y && val != kk && val != kk + 1)
                .count();
            if irregular > 2 * (k as usize + 2) {
                return Ok(None);
            }
        }
        let v_last = *v.syllables().last().unwrap();
        let v_last_local = self.local(v_last.gen).unwrap();
        let even = self.m % 2 == 0;
        let e0: i64 = v_sylls.iter().filter(|s| s.0 == 0).map(|s| s.1).sum();
        let e1: i64 = v_sylls.iter().filter(|s| s.0 == 1).map(|s| s.1).sum();
        let total = e0 + e1;
        // Power table: index t + table_max holds NF(letter^t), needed for
        // the O(1) trailing-syllable test in the search.
        let table_max = bound.max(1);
        let mut powers: [Vec<GarsideNf>; 2] = [Vec::new(), Vec::new()];
        for l in 0..2u8 {
            let mut tab = Vec::with_capacity(2 * table_max as usize + 1);
            let mut nf = GarsideNf::identity(self.m);
            for _ in 0..table_max {
                nf.push_letter(l, -1);
            }
            for _ in -table_max..=table_max {
                tab.push(nf.clone());
                if tab.len() <= 2 * table_max as usize {
                    nf.push_letter(l, 1);
                }
            }
            powers[l as usize] = tab;
        }
        for s_u in 0..=k as usize {
            if v.syll_len() + s_u < two_m {
                continue;
            }
            if s_u == 0 {
                if nf_v.is_trivial() && v.is_cyclically_reduced() {
                    return Ok(Some(Completion {
                        u: Word::empty(),
                        relator: v.clone(),
                    }));
                }
                continue;
            }
            let mut found: Option<Completion> = None;
            for first in 0..2u8 {
                self.completion_level(
                    v,
                    &nf_v,
                    s_u,
                    first,
                    bound,
                    v_last_local,
                    v_last.exp.signum(),
                    even,
                    e0,
                    e1,
                    total,
                    &powers,
                    table_max,
                    &mut found,
                )?;
            }
            if let Some(c) = found {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    #[allow(clippy::too_many_arguments)]
    fn completion_level(
        &self,
        v: &Word,
        nf_v: &GarsideNf,
        s_u: usize,
        first: u8,
        bound: i64,
        v_last_local: u8,
        v_last_sign: i64,
        even: bool,
        e0: i64,
        e1: i64,
        total: i64,
        powers: &[Vec<GarsideNf>; 2],
        table_max: i64,
        found: &mut Option<Completion>,
    ) -> Result<(), Error> {
        let pattern: Vec<u8> = (0..s_u).map(|t| ((first as usize + t) % 2) as u8).collect();
        let last_l = pattern[s_u - 1];
        // The trailing exponent is solved from exponent-sum invariants:
        // r = v u trivial forces per-generator sums (even m) or the total
        // sum (odd m) to vanish.
        let want_last = |exps: &[i64]| -> i64 {
            if even {
                let vsum = if last_l == 0 { e0 } else { e1 };
                let usum: i64 = pattern[..s_u - 1]
                    .iter()
                    .zip(exps.iter())
                    .filter(|(&l, _)| l == last_l)
                    .map(|(_, &e)| e)
                    .sum();
                -(vsum + usum)
            } else {
                let usum: i64 = exps.iter().sum();
                -(total + usum)
            }
        };
        // For even m, non-last syllables of the other generator are also
        // sum-constrained; rather than special-casing, enumerate free
        // positions and validate the whole candidate by normal form.
        let mut exps = vec![0i64; s_u.saturating_sub(1)];
        let mut nfs: Vec<GarsideNf> = vec![nf_v.clone()];
        self.completion_dfs(
            v,
            s_u,
            &pattern,
            bound,
            v_last_local,
            v_last_sign,
            &mut exps,
            0,
            &mut nfs,
            &want_last,
            powers,
            table_max,
            found,
        );
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn completion_dfs(
        &self,
        v: &Word,
        s_u: usize,
        pattern: &[u8],
        bound: i64,
        v_last_local: u8,
        v_last_sign: i64,
        exps: &mut Vec<i64>,
        depth: usize,
        nfs: &mut Vec<GarsideNf>,
        want_last: &dyn Fn(&[i64]) -> i64,
        powers: &[Vec<GarsideNf>; 2],
        table_max: i64,
        found: &mut Option<Completion>,
    ) {
        if depth == s_u - 1 {
            // Solve the final syllable and compare against the power table:
            // NF(v u_prefix) == NF(last^-e) iff NF(v u) is trivial.
            let e = want_last(exps);
            if e == 0 || e.abs() > bound {
                return;
            }
            let last_l = pattern[s_u - 1];
            if s_u == 1 && last_l == v_last_local && e.signum() != v_last_sign {
                return;
            }
            if *nfs.last().unwrap() != powers[last_l as usize][(-e + table_max) as usize] {
                return;
            }
            let mut u_sylls: Vec<(u8, i64)> = pattern[..s_u - 1]
                .iter()
                .zip(exps.iter())
                .map(|(&l, &x)| (l, x))
                .collect();
            u_sylls.push((last_l, e));
            let u = self.word_from_local(&u_sylls);
            let r = v.concat(&u);
            if r.letter_len() != v.letter_len() + u.letter_len() {
                return;
            }
            if !r.is_cyclically_reduced() {
                return;
            }
            debug_assert!(self.garside_nf(&r).unwrap().is_trivial());
            let better = match found {
                None => true,
                Some(c) => {
                    u.letter_len() < c.u.letter_len()
                        || (u.letter_len() == c.u.letter_len()
                            && u.shortlex_cmp(&c.u) == std::cmp::Ordering::Less)
                }
            };
            if better {
                *found = Some(Completion { u, relator: r });
            }
            return;
        }
        let letter = pattern[depth];
        for e in (-bound..=bound).filter(|&e| e != 0) {
            if depth == 0 && letter == v_last_local && e.signum() != v_last_sign {
                continue;
            }
            let mut nf = nfs.last().unwrap().clone();
            nf.push_local(letter, e);
            nfs.push(nf);
            exps[depth] = e;
            self.completion_dfs(
                v,
                s_u,
                pattern,
                bound,
                v_last_local,
                v_last_sign,
                exps,
                depth + 1,
                nfs,
                want_last,
                powers,
                table_max,
                found,
            );
            nfs.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    fn pair(m: u32) -> DihedralPair {
        DihedralPair::new(1, 2, m).unwrap()
    }

    #[test]
    fn relator_spellings() {
        assert_eq!(pair(2).relator(), w("a1 a2 a1^-1 a2^-1"));
        assert_eq!(pair(3).relator(), w("a1 a2 a1 a2^-1 a1^-1 a2^-1"));
        let r7 = pair(7).relator();
        assert_eq!(r7.letter_len(), 14);
        assert_eq!(r7.syll_len(), 14);
        assert!(r7.is_cyclically_reduced());
    }

    #[test]
    fn simples_census() {
        for m in 2..=8 {
            let p = pair(m);
            let s = p.simples();
            assert_eq!(s.len(), 2 * m as usize, "m={m}");
            // Closed under the complement map s -> s^-1 delta.
            for &x in &s {
                assert!(s.contains(&p.right_complement(x)), "m={m} {x:?}");
            }
            // Identification oracle: alternating positive words of length
            // 0..=m, both starts, collapse into exactly 2m classes under
            // the amalgam oracle (the two length-m words coincide).
            let mut reps: Vec<AmalgamNf> = Vec::new();
            for len in 0..=m {
                for start in 0..2u8 {
                    let word = p.alternating(start, len);
                    let nf = p.amalgam_nf(&word).unwrap();
                    if !reps.contains(&nf) {
                        reps.push(nf);
                    }
                }
            }
            assert_eq!(reps.len(), 2 * m as usize, "m={m}");
            let d0 = p.amalgam_nf(&p.alternating(0, m)).unwrap();
            let d1 = p.amalgam_nf(&p.alternating(1, m)).unwrap();
            assert_eq!(d0, d1, "m={m}: the two length-m words are the same element");
        }
    }

    #[test]
    fn garside_basics() {
        let p = pair(3);
        assert!(p.garside_nf(&Word::empty()).unwrap().is_trivial());
        // (a b)^3 is delta^2 for m = 3.
        let nf = p.garside_nf(&w("a1 a2 a1 a2 a1 a2")).unwrap();
        assert_eq!(nf.inf, 2);
        assert!(nf.factors.is_empty());
        // a^-1 = delta^-1 (a b).
        let nf = p.garside_nf(&w("a1^-1")).unwrap();
        assert_eq!(nf.inf, -1);
        assert_eq!(nf.factors.len(), 1);
        assert_eq!(nf.factors[0], Simple { start: 0, len: 2 });
        // The relator is trivial.
        assert!(p.garside_nf(&p.relator()).unwrap().is_trivial());
    }

    #[test]
    fn garside_m2_commutes() {
        let p = pair(2);
        let ab = p.garside_nf(&w("a1 a2")).unwrap();
        let ba = p.garside_nf(&w("a2 a1")).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.inf, 1);
        assert!(ab.factors.is_empty());
        assert!(p.garside_nf(&w("a1 a2 a1^-1 a2^-1")).unwrap().is_trivial());
    }

    #[test]
    fn garside_roundtrip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for m in [2u32, 3, 4, 7, 8] {
            let p = pair(m);
            for _ in 0..300 {
                let len = rng.gen_range(0..14);
                let word = Word::from_letters((0..len).map(|_| {
                    (
                        rng.gen_range(1..=2u16),
                        if rng.gen::<bool>() { 1 } else { -1 },
                    )
                }));
                let nf = p.garside_nf(&word).unwrap();
                // Factors are proper and adjacent pairs left-weighted: the
                // left one cannot absorb the right one's first letter.
                for f in &nf.factors {
                    assert!(f.len >= 1 && f.len < m);
                }
                for pairw in nf.factors.windows(2) {
                    let (s, t) = (pairw[0], pairw[1]);
                    assert!(
                        s.len == m || t.start != s.next_letter(),
                        "m={m} not left-weighted: {s:?} {t:?} in {word}"
                    );
                }
                let back = p.canonical_word(&nf);
                assert_eq!(p.garside_nf(&back).unwrap(), nf, "m={m} word {word}");
            }
        }
    }

    #[test]
    fn amalgam_maps_are_isomorphisms() {
        // Odd m = 2k+1: x = u, y = ab; a = y^-k x, b = x^-1 y^(k+1).
        for m in [3u32, 5, 7] {
            let p = pair(m);
            let k = (m / 2) as i64;
            let x = p.delta_word();
            let y = w("a1 a2");
            // Defining relation of the target: x^2 = y^m.
            let rel = x.pow(2).concat(&y.pow(-(m as i64)));
            assert!(p.garside_nf(&rel).unwrap().is_trivial(), "m={m}");
            // Round trip on generators.
            let a_back = y.pow(-k).concat(&x);
            let b_back = x.invert().concat(&y.pow(k + 1));
            assert!(p
                .garside_nf(&a_back.concat(&w("a1^-1")))
                .unwrap()
                .is_trivial());
            assert!(p
                .garside_nf(&b_back.concat(&w("a2^-1")))
                .unwrap()
                .is_trivial());
        }
        // Even m = 2k: x = ab, y = a; a = y, b = y^-1 x.
        for m in [2u32, 4, 8] {
            let p = pair(m);
            let k = (m / 2) as i64;
            let x = w("a1 a2");
            let y = w("a1");
            // Defining relation: y^-1 x^k y = x^k.
            let rel = y
                .invert()
                .concat(&x.pow(k))
                .concat(&y)
                .concat(&x.pow(-k));
            assert!(p.garside_nf(&rel).unwrap().is_trivial(), "m={m}");
            let b_back = y.invert().concat(&x);
            assert!(p
                .garside_nf(&b_back.concat(&w("a2^-1")))
                .unwrap()
                .is_trivial());
        }
    }

    #[test]
    fn amalgam_relator_trivial_all_m() {
        for m in 2..=9 {
            let p = pair(m);
            assert!(p.amalgam_nf(&p.relator()).unwrap().is_trivial(), "m={m}");
            assert!(!p.amalgam_nf(&w("a1")).unwrap().is_trivial());
            assert!(!p.amalgam_nf(&w("a1 a2")).unwrap().is_trivial());
        }
    }

    #[test]
    fn oracles_agree_on_equality_partition() {
        // Exhaustive: all freely reduced words of letter length <= 5 in
        // m = 3, pairwise: garside equality iff amalgam equality.
        let p = pair(3);
        let mut words = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for word in &frontier {
                for (g, s) in [(1u16, 1i64), (1, -1), (2, 1), (2, -1)] {
                    let ext = word.concat(&Word::power(g, s));
                    if ext.letter_len() == word.letter_len() + 1 {
                        next.push(ext);
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let data: Vec<(GarsideNf, AmalgamNf)> = words
            .iter()
            .map(|word| {
                (
                    p.garside_nf(word).unwrap(),
                    p.amalgam_nf(word).unwrap(),
                )
            })
            .collect();
        for a in 0..data.len() {
            for b in a + 1..data.len() {
                assert_eq!(
                    data[a].0 == data[b].0,
                    data[a].1 == data[b].1,
                    "partition mismatch: {} vs {}",
                    words[a],
                    words[b]
                );
            }
        }
    }

    #[test]
    fn delta_squared_is_central() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for m in [2u32, 3, 4, 7] {
            let p = pair(m);
            let d2 = p.delta_word().pow(2);
            for _ in 0..50 {
                let len = rng.gen_range(0..8);
                let g = Word::from_letters((0..len).map(|_| {
                    (
                        rng.gen_range(1..=2u16),
                        if rng.gen::<bool>() { 1 } else { -1 },
                    )
                }));
                let lhs = d2.concat(&g);
                let rhs = g.concat(&d2);
                assert_eq!(
                    p.garside_nf(&lhs).unwrap(),
                    p.garside_nf(&rhs).unwrap(),
                    "m={m} g={g}"
                );
            }
            // delta itself: central iff m even; for odd m it swaps a and b.
            let d = p.delta_word();
            let conj_a = d.concat(&w("a1")).concat(&d.invert());
            let expect = if m % 2 == 0 { w("a1") } else { w("a2") };
            assert_eq!(
                p.garside_nf(&conj_a).unwrap(),
                p.garside_nf(&expect).unwrap(),
                "m={m}"
            );
        }
    }

    #[test]
    fn scan_state_matches_batch_oracles() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for m in [2u32, 3, 4, 7, 8] {
            let p = pair(m);
            let mut st = DihedralScanState::new(m);
            let mut sylls: Vec<(u8, i64)> = Vec::new();
            for _ in 0..400 {
                let push = sylls.is_empty() || (st.depth() < 10 && rng.gen::<bool>());
                if push {
                    let letter = match sylls.last() {
                        Some(&(l, _)) => 1 - l,
                        None => rng.gen_range(0..2u8),
                    };
                    let exp = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
                    sylls.push((letter, exp));
                    st.push_syllable(letter, exp);
                } else {
                    sylls.pop();
                    st.pop_syllable();
                }
                let word = Word::from_syllables(
                    sylls.iter().map(|&(l, e)| Syllable::new(p.global(l), e)),
                );
                assert_eq!(
                    st.garside_trivial(),
                    p.garside_nf(&word).unwrap().is_trivial()
                );
                assert_eq!(
                    st.amalgam_trivial(),
                    p.amalgam_nf(&word).unwrap().is_trivial()
                );
                assert_eq!(st.amalgam(), p.amalgam_nf(&word).unwrap());
            }
        }
    }

    #[test]
    fn short_trivial_words_do_not_exist() {
        // Desk-scale spot check (the acceptance suite runs the full range):
        // every nonempty cyclically reduced word with fewer than 2m
        // syllables and per-syllable exponent magnitude <= 2 is nontrivial.
        for m in [2u32, 3] {
            let p = pair(m);
            let mut stack: Vec<(u8, i64)> = Vec::new();
            let mut st = DihedralScanState::new(m);
            fn rec(
                p: &DihedralPair,
                st: &mut DihedralScanState,
                stack: &mut Vec<(u8, i64)>,
                max: usize,
            ) {
                if !stack.is_empty() {
                    let first = stack[0];
                    let last = *stack.last().unwrap();
                    let cyc = first.0 != last.0 || first.1.signum() == last.1.signum() || stack.len() == 1;
                    if cyc {
                        assert!(
                            !(st.garside_trivial() || st.amalgam_trivial()),
                            "m={} trivial short word {:?}",
                            p.m,
                            stack
                        );
                    }
                }
                if stack.len() == max {
                    return;
                }
                let letters: &[u8] = if stack.is_empty() {
                    &[0, 1]
                } else if stack.last().unwrap().0 == 0 {
                    &[1]
                } else {
                    &[0]
                };
                for &l in letters {
                    for e in [-2i64, -1, 1, 2] {
                        stack.push((l, e));
                        st.push_syllable(l, e);
                        rec(p, st, stack, max);
                        st.pop_syllable();
                        stack.pop();
                    }
                }
            }
            rec(&p, &mut st, &mut stack, 2 * m as usize - 1);
        }
    }

    #[test]
    fn in_rij_examples() {
        let p = pair(7);
        assert!(p.in_rij(&p.relator()).unwrap());
        assert!(!p.in_rij(&w("a1")).unwrap());
        assert!(!p.in_rij(&Word::empty()).unwrap());
        // A conjugated relator is trivial but not cyclically reduced.
        let conj = p.relator().conjugate_by(&w("a1"));
        assert!(!p.in_rij(&conj).unwrap());
        assert!(p.in_rij(&p.relator().invert()).unwrap());
        assert!(matches!(
            p.in_rij(&w("a3")),
            Err(Error::ForeignGenerator(3))
        ));
    }

    #[test]
    fn min_syllable_short_regime() {
        let p = pair(7);
        // Below m syllables the word is its own unique minimal form.
        let word = w("a1^5");
        let r = p.min_syllable_rep(&word, SearchBounds::default()).unwrap();
        assert_eq!(r.word, word);
        assert_eq!(r.status, MinSyllStatus::Exhaustive);
        let word = w("a1 a2^-1 a1^3 a2");
        let r = p.min_syllable_rep(&word, SearchBounds::default()).unwrap();
        assert_eq!(r.word, word);
        assert_eq!(r.status, MinSyllStatus::Exhaustive);
    }

    #[test]
    fn min_syllable_u_word() {
        // The m-letter alternating word admits nothing shorter.
        let p = pair(7);
        let u = p.alternating(0, 7);
        let r = p.min_syllable_rep(&u, SearchBounds::default()).unwrap();
        assert_eq!(r.word, u);
        assert_eq!(r.status, MinSyllStatus::Exhaustive);
    }

    #[test]
    fn min_syllable_search_agrees_with_shortcut() {
        use rand::{Rng, SeedableRng};
        // The short-word regime returns words unchanged without searching;
        // a bounded level-by-level search must agree that nothing shorter
        // exists.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for m in [4u32, 7] {
            let p = pair(m);
            for _ in 0..25 {
                let len = rng.gen_range(1..4usize);
                let mut sylls = Vec::new();
                let start: u8 = rng.gen_range(0..2);
                for t in 0..len {
                    let e = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
                    sylls.push((((start as usize + t) % 2) as u8, e));
                }
                let word = p.word_from_local(&sylls);
                let r = p.min_syllable_rep(&word, SearchBounds::default()).unwrap();
                assert_eq!(r.word, word, "m={m}");
                assert_eq!(r.status, MinSyllStatus::Exhaustive, "m={m}");
                let target = p.garside_nf(&word).unwrap();
                let bound = (word.letter_len() + 2 * m as u64) as i64;
                let e0: i64 = sylls.iter().filter(|s| s.0 == 0).map(|s| s.1).sum();
                let e1: i64 = sylls.iter().filter(|s| s.0 == 1).map(|s| s.1).sum();
                for s in 0..word.syll_len() {
                    assert!(!(s == 0 && target.is_trivial()), "m={m} word={word}");
                    if s == 0 {
                        continue;
                    }
                    let mut found: Option<Word> = None;
                    p.level_direct(&target, s, bound, e0, e1, e0 + e1, &mut |c| {
                        found.get_or_insert(c);
                    })
                    .unwrap();
                    assert!(
                        found.is_none(),
                        "m={m} word={word}: unexpected shorter representative {}",
                        found.unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn min_syllable_long_trivialish_word() {
        // (a b)^3 at m = 3 is the square of the Garside element; the full
        // search ladder (including meet-in-the-middle levels) must find
        // its true syllable-minimal spelling. The frozen value comes from
        // the same search run with enlarged bounds.
        let p = pair(3);
        let word = w("a1 a2 a1 a2 a1 a2");
        let r = p.min_syllable_rep(&word, SearchBounds::default()).unwrap();
        assert_eq!(
            p.garside_nf(&r.word).unwrap(),
            p.garside_nf(&word).unwrap()
        );
        // (a^2 b)^2 equals the central square by hand: a^2 b = y^-1 x y in
        // the amalgam model, so its square is x^2. Four syllables, and the
        // exponent bound cannot certify global minimality at odd m.
        assert_eq!(r.word, w("a1^2 a2 a1^2 a2"));
        assert_eq!(r.word.syll_len(), 4);
        assert_eq!(r.status, MinSyllStatus::Bounded);
    }

    #[test]
    fn relator_completion_examples() {
        let p = pair(7);
        let r = p.relator();
        // The full relator completes with the empty tail.
        let c = p.relator_completion(&r, 3, None).unwrap().unwrap();
        assert!(c.u.is_empty());
        assert_eq!(c.relator, r);
        // Dropping the last three syllables: the completion restores them.
        let v = r.subword(0..11);
        let c = p.relator_completion(&v, 3, None).unwrap().unwrap();
        assert_eq!(c.u, r.subword(11..14));
        assert_eq!(c.relator, r);
        // A long generator power has no completion.
        assert!(p.relator_completion(&w("a1^9"), 3, None).unwrap().is_none());
        // Dropping four syllables is beyond slack 3 but within slack 4.
        let v = r.subword(0..10);
        assert!(p.relator_completion(&v, 3, None).unwrap().is_none());
        let c = p.relator_completion(&v, 4, None).unwrap().unwrap();
        assert_eq!(c.u, r.subword(10..14));
    }

    #[test]
    fn relator_completion_split_boundary() {
        // A subword that starts mid-syllable still completes: take the
        // relator of m = 7 shifted cyclically so an exponent splits.
        let p = pair(7);
        let r = p.relator();
        // v = last 12 syllables; u must supply the missing 2.
        let v = r.subword(2..14);
        let c = p.relator_completion(&v, 3, None).unwrap();
        // v u must be cyclically reduced and trivial; v here starts with
        // a1 and ends with a2^-1, so a completion of 2 syllables exists
        // (the two dropped leading syllables, conjugated around).
        let c = c.expect("completion exists");
        assert!(c.u.syll_len() <= 3);
        assert!(p.in_rij(&c.relator).unwrap());
    }
}
