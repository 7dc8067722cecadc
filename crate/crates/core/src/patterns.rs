//! Regex-style pattern matching over sum-typed event streams.
//!
//! Matching is the purely temporal third of complex-event detection:
//! content predicates compose in front of it as element selections and the
//! final reshaping composes after it as a projection. The input is a
//! stream without simultaneous elements whose payloads carry a tag from a
//! finite alphabet; the output is a bag stream of typed match values whose
//! shape mirrors the pattern.

use std::collections::BTreeSet;

use crate::base::{Bag, BagBase, MaybeBase, Value};
use crate::error::Error;
use crate::stream::Stream;
use crate::time::{FiniteDomain, TimePoint};

/// A payload with its tag from the stream's alphabet. N-ary tags encode
/// the usual binary left/right injections, nested.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tagged<X: Value> {
    pub tag: String,
    pub payload: X,
}

impl<X: Value> Tagged<X> {
    pub fn new(tag: impl Into<String>, payload: X) -> Self {
        Tagged { tag: tag.into(), payload }
    }
}

/// The pattern AST. Construction always bottoms out at atoms, so every
/// pattern has a non-empty alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Pattern {
    Atom(String),
    Sequence(Box<Pattern>, Box<Pattern>),
    Alternation(Box<Pattern>, Box<Pattern>),
    Star(Box<Pattern>),
    Optional(Box<Pattern>),
}

impl Pattern {
    pub fn atom(tag: impl Into<String>) -> Pattern {
        Pattern::Atom(tag.into())
    }

    pub fn then(self, next: Pattern) -> Pattern {
        Pattern::Sequence(Box::new(self), Box::new(next))
    }

    pub fn or(self, other: Pattern) -> Pattern {
        Pattern::Alternation(Box::new(self), Box::new(other))
    }

    pub fn star(self) -> Pattern {
        Pattern::Star(Box::new(self))
    }

    pub fn optional(self) -> Pattern {
        Pattern::Optional(Box::new(self))
    }

    /// Tags mentioned by the pattern; matching under the skip-irrelevant
    /// policy deletes elements whose tag is not in this set.
    pub fn tags(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_tags(&mut out);
        out
    }

    fn collect_tags(&self, out: &mut BTreeSet<String>) {
        match self {
            Pattern::Atom(tag) => {
                out.insert(tag.clone());
            }
            Pattern::Sequence(a, b) | Pattern::Alternation(a, b) => {
                a.collect_tags(out);
                b.collect_tags(out);
            }
            Pattern::Star(p) | Pattern::Optional(p) => p.collect_tags(out),
        }
    }

    /// Parse the textual syntax: tags are identifiers, `.` sequences,
    /// `|` alternates, `*` and `?` are postfix, parentheses group.
    /// `*`/`?` bind tightest, then `.`, then `|`.
    pub fn parse(text: &str) -> Result<Pattern, Error> {
        let mut parser = Parser { bytes: text.as_bytes(), pos: 0 };
        parser.skip_ws();
        if parser.at_end() {
            return Err(Error::EmptyPattern);
        }
        let p = parser.alternation()?;
        parser.skip_ws();
        if !parser.at_end() {
            return Err(parser.error("trailing input"));
        }
        Ok(p)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::PatternSyntax { at: self.pos, message: message.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn alternation(&mut self) -> Result<Pattern, Error> {
        let mut p = self.sequence()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'|') {
                self.pos += 1;
                p = p.or(self.sequence()?);
            } else {
                return Ok(p);
            }
        }
    }

    fn sequence(&mut self) -> Result<Pattern, Error> {
        let mut p = self.postfix()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'.') {
                self.pos += 1;
                p = p.then(self.postfix()?);
            } else {
                return Ok(p);
            }
        }
    }

    fn postfix(&mut self) -> Result<Pattern, Error> {
        let mut p = self.primary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    p = p.star();
                }
                Some(b'?') => {
                    self.pos += 1;
                    p = p.optional();
                }
                _ => return Ok(p),
            }
        }
    }

    fn primary(&mut self) -> Result<Pattern, Error> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.alternation()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
                    self.pos += 1;
                }
                let tag = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                Ok(Pattern::atom(tag))
            }
            _ => Err(self.error("expected a tag or '('")),
        }
    }
}

/// A typed match result; the shape is fully determined by the pattern.
#[derive(Clone, PartialEq, Debug)]
pub enum MatchValue<X: Value> {
    Atom(X),
    Pair(Box<MatchValue<X>>, Box<MatchValue<X>>),
    Left(Box<MatchValue<X>>),
    Right(Box<MatchValue<X>>),
    List(Vec<MatchValue<X>>),
    Present(Box<MatchValue<X>>),
    Absent,
}

impl<X: Value> MatchValue<X> {
    /// Constituent payloads in match order.
    pub fn payloads(&self) -> Vec<X> {
        let mut out = Vec::new();
        self.collect_payloads(&mut out);
        out
    }

    fn collect_payloads(&self, out: &mut Vec<X>) {
        match self {
            MatchValue::Atom(x) => out.push(x.clone()),
            MatchValue::Pair(a, b) => {
                a.collect_payloads(out);
                b.collect_payloads(out);
            }
            MatchValue::Left(v) | MatchValue::Right(v) | MatchValue::Present(v) => {
                v.collect_payloads(out)
            }
            MatchValue::List(items) => {
                for v in items {
                    v.collect_payloads(out);
                }
            }
            MatchValue::Absent => {}
        }
    }
}

/// Structural conformance of a match value to a pattern.
pub fn conforms<X: Value>(p: &Pattern, v: &MatchValue<X>) -> bool {
    match (p, v) {
        (Pattern::Atom(_), MatchValue::Atom(_)) => true,
        (Pattern::Sequence(p1, p2), MatchValue::Pair(v1, v2)) => {
            conforms(p1, v1) && conforms(p2, v2)
        }
        (Pattern::Alternation(p1, _), MatchValue::Left(v1)) => conforms(p1, v1),
        (Pattern::Alternation(_, p2), MatchValue::Right(v2)) => conforms(p2, v2),
        (Pattern::Star(inner), MatchValue::List(items)) => {
            items.iter().all(|item| conforms(inner, item))
        }
        (Pattern::Optional(inner), MatchValue::Present(v1)) => conforms(inner, v1),
        (Pattern::Optional(_), MatchValue::Absent) => true,
        _ => false,
    }
}

/// Which elements may sit between the pattern's constituents.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum MatchPolicy {
    /// Constituents must be contiguous in the full element sequence.
    Strict,
    /// Elements whose tag does not occur in the pattern are deleted before
    /// matching, so they never break contiguity.
    #[default]
    SkipIrrelevant,
}

/// Match `p` against the time-ordered present elements of `s` over `dom`.
///
/// Every accepted contiguous sub-sequence contributes one match value per
/// accepting parse (match-all semantics: ambiguous patterns and each
/// viable star length emit distinct matches). A match is emitted at the
/// time of its last constituent — the first instant at which it is fully
/// observable — and simultaneous completions accumulate in the bag.
/// Matches consuming no element at all are suppressed.
pub fn match_pattern<X: Value>(
    p: &Pattern,
    policy: MatchPolicy,
    s: &Stream<MaybeBase, Tagged<X>>,
    dom: &FiniteDomain,
) -> Stream<BagBase, MatchValue<X>> {
    let mut elems: Vec<(TimePoint, Tagged<X>)> = Vec::new();
    for t in dom.iter() {
        if let Some(e) = s.eval(t) {
            elems.push((t, e));
        }
    }
    if policy == MatchPolicy::SkipIrrelevant {
        let alphabet = p.tags();
        elems.retain(|(_, e)| alphabet.contains(&e.tag));
    }

    let mut emissions: Vec<(TimePoint, Bag<MatchValue<X>>)> = Vec::new();
    for start in 0..elems.len() {
        for (consumed, value) in prefix_parses(p, &elems[start..]) {
            if consumed == 0 {
                continue;
            }
            let at = elems[start + consumed - 1].0;
            match emissions.iter_mut().find(|(t, _)| *t == at) {
                Some((_, bag)) => bag.insert(value, 1),
                None => {
                    let mut bag = Bag::new();
                    bag.insert(value, 1);
                    emissions.push((at, bag));
                }
            }
        }
    }
    Stream::from_table(emissions)
}

/// All (consumed-prefix-length, match-value) pairs of `p` against the
/// front of `elems`. Star enumerates every repetition count; nullable
/// sub-patterns contribute zero-length parses that a surrounding sequence
/// may combine with.
fn prefix_parses<X: Value>(
    p: &Pattern,
    elems: &[(TimePoint, Tagged<X>)],
) -> Vec<(usize, MatchValue<X>)> {
    match p {
        Pattern::Atom(tag) => match elems.first() {
            Some((_, e)) if e.tag == *tag => vec![(1, MatchValue::Atom(e.payload.clone()))],
            _ => Vec::new(),
        },
        Pattern::Sequence(p1, p2) => {
            let mut out = Vec::new();
            for (k1, v1) in prefix_parses(p1, elems) {
                for (k2, v2) in prefix_parses(p2, &elems[k1..]) {
                    out.push((k1 + k2, MatchValue::Pair(Box::new(v1.clone()), Box::new(v2))));
                }
            }
            out
        }
        Pattern::Alternation(p1, p2) => {
            let mut out: Vec<(usize, MatchValue<X>)> = prefix_parses(p1, elems)
                .into_iter()
                .map(|(k, v)| (k, MatchValue::Left(Box::new(v))))
                .collect();
            out.extend(
                prefix_parses(p2, elems)
                    .into_iter()
                    .map(|(k, v)| (k, MatchValue::Right(Box::new(v)))),
            );
            out
        }
        Pattern::Star(inner) => {
            let mut out = vec![(0, MatchValue::List(Vec::new()))];
            // each repetition must consume input, so recursion terminates
            for (k1, v1) in prefix_parses(inner, elems) {
                if k1 == 0 {
                    continue;
                }
                for (k, rest) in prefix_parses(p, &elems[k1..]) {
                    let MatchValue::List(items) = rest else { unreachable!() };
                    let mut list = Vec::with_capacity(items.len() + 1);
                    list.push(v1.clone());
                    list.extend(items);
                    out.push((k1 + k, MatchValue::List(list)));
                }
            }
            out
        }
        Pattern::Optional(inner) => {
            let mut out = vec![(0, MatchValue::Absent)];
            out.extend(
                prefix_parses(inner, elems)
                    .into_iter()
                    .map(|(k, v)| (k, MatchValue::Present(Box::new(v)))),
            );
            out
        }
    }
}

/// A row window expressed as pattern matching: the n-fold sequence of a
/// single atom, skip-irrelevant. Unlike the bag-valued row window, the
/// matches retain element order.
pub fn row_window_via_pattern<X: Value>(
    n: usize,
    s: &Stream<MaybeBase, X>,
    dom: &FiniteDomain,
) -> Result<Stream<BagBase, Vec<X>>, Error> {
    if n == 0 {
        return Err(Error::ZeroRows(0));
    }
    let mut p = Pattern::atom("a");
    for _ in 1..n {
        p = p.then(Pattern::atom("a"));
    }
    let tagged = crate::stream::map_stream(|x: &X| Tagged::new("a", x.clone()), s);
    let matches = match_pattern(&p, MatchPolicy::SkipIrrelevant, &tagged, dom);
    Ok(crate::stream::map_stream(
        |m: &MatchValue<X>| m.payloads(),
        &matches,
    ))
}
