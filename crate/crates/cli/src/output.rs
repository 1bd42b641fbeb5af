//! Machine-readable line records and shared formatting helpers.
//!
//! A machine record is one line of space-separated `key=value` pairs with
//! a fixed key order per record kind; the first key is always `kind`.
//! Values are percent-encoded (`%`, `=`, space, newline), so a record is
//! recovered by splitting on spaces, then on the first `=`, then decoding.

use relhyp::Word;
use std::fmt::Display;
use std::fmt::Write as _;

/// Percent-encodes the characters that would break record framing.
pub fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '%' => out.push_str("%25"),
            '=' => out.push_str("%3D"),
            ' ' => out.push_str("%20"),
            '\n' => out.push_str("%0A"),
            _ => out.push(c),
        }
    }
    out
}

/// One machine record under construction.
pub struct Rec {
    line: String,
}

impl Rec {
    pub fn new(kind: &str) -> Rec {
        Rec {
            line: format!("kind={kind}"),
        }
    }

    /// Appends `key=value`, escaping the value.
    pub fn kv(mut self, key: &str, value: impl Display) -> Rec {
        let _ = write!(self.line, " {key}={}", esc(&value.to_string()));
        self
    }

    /// Prints the finished record on its own line.
    pub fn emit(self) {
        println!("{}", self.line);
    }
}

/// Dot-joined token spelling, with `1` for the empty word. This is the
/// one word syntax every subcommand prints and accepts back.
pub fn wtok(w: &Word) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.token_string()
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping_is_reversible_and_targeted() {
        assert_eq!(esc("a1.a2^-3"), "a1.a2^-3");
        assert_eq!(esc("a b=c%d"), "a%20b%3Dc%25d");
        let decoded = esc("x = 5%")
            .replace("%20", " ")
            .replace("%3D", "=")
            .replace("%25", "%");
        assert_eq!(decoded, "x = 5%");
    }

    #[test]
    fn records_keep_key_order() {
        let r = Rec::new("demo").kv("a", 1).kv("b", "two words");
        assert_eq!(r.line, "kind=demo a=1 b=two%20words");
    }

    #[test]
    fn empty_word_prints_as_one() {
        assert_eq!(wtok(&Word::empty()), "1");
        let w = Word::parse("a1^2 a2^-1").unwrap();
        assert_eq!(wtok(&w), "a1^2.a2^-1");
    }
}
