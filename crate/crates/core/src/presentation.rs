//! Presentations `A = T(V)/(R)` of s-homogeneous algebras and their text
//! format.
//!
//! ```text
//! # the truncated polynomial algebra k[x]/(x^3)
//! generators = x
//! degree = 3
//! rel: x*x*x
//! ```
//!
//! Statements are separated by newlines (or `;`). Relations are linear
//! combinations of words of length exactly `degree`; coefficients are
//! integers or `p/q` and bind to a word with `*`, e.g. `-3/2*x*y*y`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Position, Result};
use crate::linalg::{Field, Matrix, Rational, Rationals, SparseVec, Subspace};
use crate::words;

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    generators: Vec<String>,
    degree: usize,
    relations: Subspace<Rationals>,
}

/// One parsed relation: coefficients on words of length `s`, with repeated
/// words already combined.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationExpression {
    pub terms: Vec<(Rational, Vec<usize>)>,
}

impl RelationExpression {
    pub fn to_vector(&self, g: usize) -> SparseVec<Rational> {
        self.terms
            .iter()
            .map(|(c, w)| (words::index(w, g), c.clone()))
            .collect()
    }
}

impl Presentation {
    /// Validates generator names and degree; `relations` are vectors in the
    /// word basis of `V^{⊗s}` and may be linearly dependent.
    pub fn new(generators: Vec<String>, degree: usize, relations: Vec<SparseVec<Rational>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        let mut seen = HashSet::new();
        for name in &generators {
            if !is_identifier(name) {
                return Err(Error::InvalidPresentation(format!("invalid generator name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate generator {name:?}")));
            }
        }
        if degree < 2 {
            return Err(Error::InvalidPresentation(format!("degree must be at least 2, got {degree}")));
        }
        let ambient = words::pow(generators.len(), degree);
        let spanning = Matrix::from_entries(Rationals, ambient, relations);
        let relations = Subspace::from_spanning(&spanning, Some(degree));
        Ok(Presentation {
            generators,
            degree,
            relations,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().parse(text)
    }

    /// Cubic relations `Σ_i [x_i, [x_i, x_j]]`, one for each `j`.
    pub fn yang_mills(g: usize) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidPresentation(format!("Yang-Mills needs at least 2 generators, got {g}")));
        }
        let one = Rational::one();
        let minus_two = Rational::from(-2);
        let relations = (0..g)
            .map(|j| {
                (0..g)
                    .flat_map(|i| {
                        [
                            (words::index(&[i, i, j], g), one.clone()),
                            (words::index(&[i, j, i], g), minus_two.clone()),
                            (words::index(&[j, i, i], g), one.clone()),
                        ]
                    })
                    .collect()
            })
            .collect();
        let names = (1..=g).map(|i| format!("x{i}")).collect();
        Self::new(names, 3, relations)
    }

    /// A random presentation whose relation space has dimension `dim`
    /// (capped at `g^s`). Relations are sparse with small integer
    /// coefficients.
    pub fn random<R: Rng>(g: usize, s: usize, dim: usize, rng: &mut R) -> Result<Self> {
        let ambient = words::pow(g, s);
        let dim = dim.min(ambient);
        let names: Vec<String> = if g <= 26 {
            (0..g).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
        } else {
            (0..g).map(|i| format!("x{i}")).collect()
        };
        let coeffs = [-2i64, -1, 1, 2];
        let mut current = Self::new(names.clone(), s, Vec::new())?;
        let mut rows: Vec<SparseVec<Rational>> = Vec::new();
        while current.relations.dim() < dim {
            let terms = rng.gen_range(1..=3.min(ambient));
            let row = rand::seq::index::sample(rng, ambient, terms)
                .into_iter()
                .map(|w| (w, Rational::from(*coeffs.choose(rng).unwrap())))
                .collect();
            rows.push(row);
            let candidate = Self::new(names.clone(), s, rows.clone())?;
            if candidate.relations.dim() > current.relations.dim() {
                current = candidate;
            } else {
                rows.pop();
            }
        }
        Ok(current)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// The homogeneity degree `s`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn relations(&self) -> &Subspace<Rationals> {
        &self.relations
    }

    /// The relation space with coefficients mapped into `field`.
    pub fn relations_over<F: Field>(&self, field: &F) -> Result<Subspace<F>> {
        let rows = self
            .relations
            .basis()
            .row_vecs()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, q)| {
                        field
                            .from_rational(q)
                            .map(|x| (*c, x))
                            .ok_or_else(|| Error::CoefficientNotInField(q.to_string(), field.name()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let spanning = Matrix::from_entries(field.clone(), self.relations.ambient_dim(), rows);
        Ok(Subspace::from_spanning(&spanning, Some(self.degree)))
    }

    pub fn render_word(&self, idx: usize, len: usize) -> String {
        words::render(idx, len, &self.generators)
    }

    pub fn render_vector<E: fmt::Display>(&self, v: &[(usize, E)], len: usize) -> String {
        let mut out = String::new();
        for (k, (w, c)) in v.iter().enumerate() {
            let c = c.to_string();
            let (neg, mag) = match c.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, c),
            };
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&self.render_word(*w, len));
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators = {}", self.generators.join(", "))?;
        writeln!(f, "degree = {}", self.degree)?;
        for row in self.relations.basis().row_vecs() {
            writeln!(f, "rel: {}", self.render_vector(row, self.degree))?;
        }
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
}

#[derive(Default)]
struct Parser {
    generators: Option<Vec<String>>,
    degree: Option<usize>,
    relations: Vec<SparseVec<Rational>>,
}

fn err(pos: Position, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn tokenize(stmt: &str, line: usize, col0: usize) -> Result<Vec<(Tok, Position)>> {
    let chars: Vec<char> = stmt.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Position { line, column: col0 + i };
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(chars[start..i].iter().collect()), pos));
        } else if "=,:*/+-".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(err(pos, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(Tok, Position)],
    at: usize,
    end: Position,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Position {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn next(&mut self) -> Option<(Tok, Position)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.next() {
            Some((Tok::Sym(d), _)) if d == c => Ok(()),
            Some((t, p)) => Err(err(p, format!("expected '{c}', found {}", describe(&t)))),
            None => Err(err(self.end, format!("expected '{c}', found end of statement"))),
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.toks.get(self.at) {
            None => Ok(()),
            Some((t, p)) => Err(err(*p, format!("unexpected {}", describe(t)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::Int(s) => format!("number {s}"),
        Tok::Sym(c) => format!("'{c}'"),
    }
}

impl Parser {
    fn parse(mut self, text: &str) -> Result<Presentation> {
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut col = 1;
            for stmt in line.split(';') {
                let toks = tokenize(stmt, ln + 1, col)?;
                let end = Position {
                    line: ln + 1,
                    column: col + stmt.chars().count(),
                };
                if !toks.is_empty() {
                    self.statement(Cursor { toks: &toks, at: 0, end })?;
                }
                col += stmt.chars().count() + 1;
            }
        }
        let end = Position {
            line: text.lines().count().max(1),
            column: 1,
        };
        let generators = self.generators.ok_or_else(|| err(end, "missing 'generators = ...'"))?;
        let degree = self.degree.ok_or_else(|| err(end, "missing 'degree = ...'"))?;
        Presentation::new(generators, degree, self.relations)
    }

    fn statement(&mut self, mut cur: Cursor<'_>) -> Result<()> {
        let (head, pos) = cur.next().unwrap();
        match head {
            Tok::Ident(ref k) if k == "generators" => {
                if self.generators.is_some() {
                    return Err(err(pos, "generators declared twice"));
                }
                cur.expect_sym('=')?;
                let mut names = Vec::new();
                let mut seen = HashSet::new();
                loop {
                    match cur.next() {
                        Some((Tok::Ident(name), p)) => {
                            if !seen.insert(name.clone()) {
                                return Err(err(p, format!("duplicate generator {name:?}")));
                            }
                            names.push(name);
                        }
                        Some((t, p)) => return Err(err(p, format!("expected generator name, found {}", describe(&t)))),
                        None => return Err(err(cur.end, "expected generator name")),
                    }
                    match cur.peek() {
                        Some(Tok::Sym(',')) => {
                            cur.next();
                        }
                        _ => break,
                    }
                }
                cur.expect_end()?;
                self.generators = Some(names);
            }
            Tok::Ident(ref k) if k == "degree" => {
                if self.degree.is_some() {
                    return Err(err(pos, "degree declared twice"));
                }
                cur.expect_sym('=')?;
                let (tok, p) = cur.next().ok_or_else(|| err(cur.end, "expected degree"))?;
                let Tok::Int(n) = tok else {
                    return Err(err(p, format!("expected integer degree, found {}", describe(&tok))));
                };
                let s: usize = n.parse().map_err(|_| err(p, "degree out of range"))?;
                if s < 2 {
                    return Err(err(p, format!("degree must be at least 2, got {s}")));
                }
                cur.expect_end()?;
                self.degree = Some(s);
            }
            Tok::Ident(ref k) if k == "rel" => {
                let (Some(names), Some(s)) = (&self.generators, self.degree) else {
                    return Err(err(pos, "relations must follow the generators and degree lines"));
                };
                cur.expect_sym(':')?;
                let expr = parse_expression(&mut cur, names, s)?;
                self.relations.push(expr.to_vector(names.len()));
            }
            other => return Err(err(pos, format!("unknown statement starting with {}", describe(&other)))),
        }
        Ok(())
    }
}

fn parse_expression(cur: &mut Cursor<'_>, names: &[String], s: usize) -> Result<RelationExpression> {
    let mut combined: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut first = true;
    loop {
        let term_pos = cur.pos();
        let mut sign = Rational::one();
        match cur.peek() {
            Some(Tok::Sym('+')) if !first => {
                cur.next();
            }
            Some(Tok::Sym('-')) => {
                cur.next();
                sign = Rational::from(-1);
            }
            Some(_) if first => {}
            Some(t) => return Err(err(cur.pos(), format!("expected '+' or '-', found {}", describe(t)))),
            None if first => return Err(err(cur.end, "empty relation")),
            None => break,
        }
        first = false;

        let mut coef = sign;
        let mut word = Vec::new();
        if let Some(Tok::Int(_)) = cur.peek() {
            let (Tok::Int(n), p) = cur.next().unwrap() else { unreachable!() };
            let mut text = n;
            if let Some(Tok::Sym('/')) = cur.peek() {
                cur.next();
                match cur.next() {
                    Some((Tok::Int(d), _)) => {
                        text.push('/');
                        text.push_str(&d);
                    }
                    Some((t, p)) => return Err(err(p, format!("expected denominator, found {}", describe(&t)))),
                    None => return Err(err(cur.end, "expected denominator")),
                }
            }
            let value: Rational = text.parse().map_err(|_| err(p, format!("invalid coefficient {text}")))?;
            coef = &coef * &value;
            match cur.peek() {
                Some(Tok::Sym('*')) => {
                    cur.next();
                }
                _ => {
                    // a bare scalar is a degree-0 term
                    return Err(Error::NonHomogeneous {
                        pos: term_pos,
                        found: 0,
                        expected: s,
                    });
                }
            }
        }
        loop {
            match cur.next() {
                Some((Tok::Ident(name), p)) => {
                    let v = names
                        .iter()
                        .position(|n| *n == name)
                        .ok_or_else(|| err(p, format!("unknown generator {name:?}")))?;
                    word.push(v);
                }
                Some((t, p)) => return Err(err(p, format!("expected generator name, found {}", describe(&t)))),
                None => return Err(err(cur.end, "expected generator name")),
            }
            match cur.peek() {
                Some(Tok::Sym('*')) => {
                    cur.next();
                }
                _ => break,
            }
        }
        match cur.peek() {
            None | Some(Tok::Sym('+')) | Some(Tok::Sym('-')) => {}
            Some(t) => return Err(err(cur.pos(), format!("unexpected {} after word", describe(t)))),
        }
        if word.len() != s {
            return Err(Error::NonHomogeneous {
                pos: term_pos,
                found: word.len(),
                expected: s,
            });
        }
        let entry = combined.entry(word).or_insert_with(Rational::zero);
        *entry = &*entry + &coef;
    }
    Ok(RelationExpression {
        terms: combined
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (c, w))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn parses_commutative_plane() {
        let p = Presentation::parse("generators = x, y; degree = 2; rel: x*y - y*x").unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.relations().dim(), 1);
    }

    #[test]
    fn parses_truncated_cubic() {
        let p = Presentation::parse("generators = x\ndegree = 3\nrel: x*x*x\n").unwrap();
        assert_eq!((p.num_generators(), p.degree(), p.relations().dim()), (1, 3, 1));
    }

    #[test]
    fn duplicate_relations_collapse() {
        let p = Presentation::parse("generators = x, y\ndegree = 3\nrel: x*y*y\nrel: x*y*y\n").unwrap();
        assert_eq!(p.relations().dim(), 1);
    }

    #[test]
    fn coefficients_and_comments() {
        let text = "# comment\ngenerators = a, b  # trailing\ndegree = 2\nrel: 3/2*a*b - 1 * b*a\nrel: -a*a + 2*a*a\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.relations().dim(), 2);
        let rel = p.relations().basis();
        // rref rows: aa, and ab - 2/3 ba
        assert_eq!(rel.row(0), &[(0, Rational::one())]);
        assert_eq!(rel.row(1), &[(1, Rational::one()), (2, Rational::new(-2, 3))]);
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            ("generators = x, x\ndegree = 2\n", "duplicate"),
            ("generators = x\ndegree = 1\n", "at least 2"),
            ("generators = x\ndegree = 2\nrel: x*z\n", "unknown generator"),
            ("generators = x\ndegree = 2\nrel: x*x*x\n", "non-homogeneous"),
            ("generators = x\ndegree = 2\nrel: x x\n", "unexpected"),
            ("generators = x\nrel: x*x\n", "must follow"),
            ("degree = 2\n", "missing 'generators"),
            ("generators = x\ndegree = 2\nrel: 1/0*x*x\n", "invalid coefficient"),
        ];
        for (text, needle) in cases {
            let e = Presentation::parse(text).unwrap_err().to_string();
            assert!(e.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn homogeneity_error_has_position() {
        let e = Presentation::parse("generators = x, y\ndegree = 3\nrel: x*y*y - y*x\n").unwrap_err();
        match e {
            Error::NonHomogeneous { pos, found, expected } => {
                assert_eq!((pos.line, pos.column, found, expected), (3, 12, 2, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn yang_mills_dims() {
        assert_eq!(Presentation::yang_mills(3).unwrap().relations().dim(), 3);
        assert_eq!(Presentation::yang_mills(2).unwrap().relations().dim(), 2);
        assert!(Presentation::yang_mills(1).is_err());
    }

    #[test]
    fn yang_mills_coefficients_sum_to_zero() {
        for g in 2..5 {
            let p = Presentation::yang_mills(g).unwrap();
            for row in p.relations().basis().row_vecs() {
                let total = row.iter().fold(Rational::zero(), |acc, (_, c)| &acc + c);
                assert!(total.is_zero());
            }
        }
    }

    #[test]
    fn display_round_trips() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (g, s, d) in [(2, 2, 1), (3, 3, 5), (2, 4, 6), (1, 3, 1)] {
            let p = Presentation::random(g, s, d, &mut rng).unwrap();
            assert_eq!(p.relations().dim(), d);
            let again = Presentation::parse(&p.to_string()).unwrap();
            assert_eq!(again, p);
        }
    }
}
