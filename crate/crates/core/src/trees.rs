//! Ranked alphabets, terms with variables, positions, substitution and
//! tree homomorphisms.
//!
//! Terms are immutable and share subterms through reference counting, so a
//! full `r`-ary tree built by a homomorphism costs memory linear in its
//! height. Evaluators key their memo tables on [`Term::id`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::{check_distinct, letter_index, Word, WordHom};

/// A finite set of symbols, each with a rank.
#[derive(Clone, Debug)]
pub struct RankedAlphabet {
    symbols: Vec<(String, usize)>,
    index: HashMap<String, usize>,
}

impl PartialEq for RankedAlphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for RankedAlphabet {}

impl RankedAlphabet {
    pub fn new(symbols: Vec<(String, usize)>) -> Result<Self> {
        let names: Vec<String> = symbols.iter().map(|(n, _)| n.clone()).collect();
        check_distinct(&names, "symbol")?;
        let index = names.into_iter().enumerate().map(|(i, n)| (n, i)).collect();
        Ok(RankedAlphabet { symbols, index })
    }

    /// Convenience constructor from `&str` pairs.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(n, r)| (n.to_string(), r)).collect())
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].1)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.symbols[i].0
    }

    pub fn rank(&self, i: usize) -> usize {
        self.symbols[i].1
    }

    /// `Rank(Γ)`, the largest rank (0 for an empty alphabet).
    pub fn max_rank(&self) -> usize {
        self.symbols.iter().map(|&(_, r)| r).max().unwrap_or(0)
    }

    /// Checks that `t` is a term over this alphabet whose variables are
    /// among `x_1..x_nvars`.
    pub fn check_term(&self, t: &Term, nvars: usize) -> Result<()> {
        match t.head() {
            Head::Var(i) => {
                if *i == 0 || *i > nvars {
                    Err(Error::VariableOutOfRange { index: *i, nvars })
                } else {
                    Ok(())
                }
            }
            Head::Sym(name) => {
                let rank = self
                    .rank_of(name)
                    .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                if rank != t.children().len() {
                    return Err(Error::RankMismatch {
                        symbol: name.clone(),
                        expected: rank,
                        found: t.children().len(),
                    });
                }
                t.children().iter().try_for_each(|c| self.check_term(c, nvars))
            }
        }
    }
}

/// Label of a term node: an alphabet symbol or a variable `x_i` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    Sym(String),
    Var(usize),
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Node {
    head: Head,
    children: Vec<Term>,
}

/// A ranked tree, possibly containing variables at its leaves.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .head
            .cmp(&other.0.head)
            .then_with(|| self.0.children.cmp(&other.0.children))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A tree address: the sequence of 1-based child indices from the root.
/// The derived order is the lexicographic order on `ℕ*`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dot-joined serialization, `""` for the root.
    pub fn to_dotted(&self) -> String {
        self.0
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|part| match part.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(Error::InvalidPosition(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Position)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            f.write_str("ε")
        } else {
            f.write_str(&self.to_dotted())
        }
    }
}

/// Variable statistics of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarStats {
    /// Number of variable-labeled positions.
    pub r: usize,
    pub non_deleting: bool,
    pub linear: bool,
}

impl Term {
    pub fn new(head: Head, children: Vec<Term>) -> Term {
        Term(Arc::new(Node { head, children }))
    }

    pub fn sym(name: impl Into<String>, children: Vec<Term>) -> Term {
        Term::new(Head::Sym(name.into()), children)
    }

    pub fn leaf(name: impl Into<String>) -> Term {
        Term::sym(name, Vec::new())
    }

    /// The variable `x_i`, 1-based.
    pub fn var(i: usize) -> Term {
        Term::new(Head::Var(i), Vec::new())
    }

    pub fn head(&self) -> &Head {
        &self.0.head
    }

    pub fn symbol(&self) -> Option<&str> {
        match &self.0.head {
            Head::Sym(s) => Some(s),
            Head::Var(_) => None,
        }
    }

    pub fn var_index(&self) -> Option<usize> {
        match self.0.head {
            Head::Var(i) => Some(i),
            Head::Sym(_) => None,
        }
    }

    pub fn children(&self) -> &[Term] {
        &self.0.children
    }

    /// Identity of the shared node, for memo tables.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn is_closed(&self) -> bool {
        self.var_index().is_none() && self.children().iter().all(Term::is_closed)
    }

    /// Node count.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Term::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        self.children().iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    /// `Pos(t)` in lexicographic order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut |p, _| out.push(Position(p.to_vec())));
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, f: &mut dyn FnMut(&[usize], &Term)) {
        f(path, self);
        for (i, c) in self.children().iter().enumerate() {
            path.push(i + 1);
            c.collect_positions(path, f);
            path.pop();
        }
    }

    /// `t|_w`.
    pub fn subtree(&self, pos: &Position) -> Result<&Term> {
        let mut t = self;
        for &i in &pos.0 {
            t = t
                .children()
                .get(i.wrapping_sub(1))
                .ok_or_else(|| Error::InvalidPosition(pos.to_string()))?;
        }
        Ok(t)
    }

    /// `t<w <- t'>`.
    pub fn replace_at(&self, pos: &Position, replacement: &Term) -> Result<Term> {
        self.replace_path(&pos.0, replacement)
            .ok_or_else(|| Error::InvalidPosition(pos.to_string()))
    }

    fn replace_path(&self, path: &[usize], replacement: &Term) -> Option<Term> {
        match path.split_first() {
            None => Some(replacement.clone()),
            Some((&i, rest)) => {
                let child = self.children().get(i.checked_sub(1)?)?;
                let new_child = child.replace_path(rest, replacement)?;
                let mut children = self.children().to_vec();
                children[i - 1] = new_child;
                Some(Term::new(self.head().clone(), children))
            }
        }
    }

    /// `t<M <- (t'_1, ..., t'_l)>`: the `i`-th position of `M` in
    /// lexicographic order receives `reps[i]`, substituting the largest
    /// position first.
    pub fn substitute_positions(&self, positions: &[Position], reps: &[Term]) -> Result<Term> {
        if positions.len() != reps.len() {
            return Err(Error::ArityMismatch {
                expected: positions.len(),
                found: reps.len(),
            });
        }
        let mut pairs: Vec<(&Position, &Term)> = positions.iter().zip(reps).collect();
        pairs.sort_by(|a, b| a.0.cmp(b.0));
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidPosition(format!("{} listed twice", w[0].0)));
            }
        }
        for (p, _) in &pairs {
            self.subtree(p)?;
        }
        let mut t = self.clone();
        for (p, rep) in pairs.into_iter().rev() {
            t = t.replace_at(p, rep)?;
        }
        Ok(t)
    }

    /// `t<M <- t'>`.
    pub fn substitute_uniform(&self, positions: &[Position], rep: &Term) -> Result<Term> {
        let reps = vec![rep.clone(); positions.len()];
        self.substitute_positions(positions, &reps)
    }

    /// `t^{-1}(x_i)` in lexicographic order.
    pub fn var_positions(&self, i: usize) -> Vec<Position> {
        self.all_var_positions()
            .into_iter()
            .filter(|(_, v)| *v == i)
            .map(|(p, _)| p)
            .collect()
    }

    /// Every variable occurrence with its index, in lexicographic order of
    /// positions.
    pub fn all_var_positions(&self) -> Vec<(Position, usize)> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut |p, t| {
            if let Some(i) = t.var_index() {
                out.push((Position(p.to_vec()), i));
            }
        });
        out
    }

    /// `t<x_i <- (t'_1, ..., t'_l)>`.
    pub fn substitute_var_tuple(&self, i: usize, reps: &[Term]) -> Result<Term> {
        self.substitute_positions(&self.var_positions(i), reps)
    }

    /// Simultaneous substitution `t<t'_1, ..., t'_n>`: every occurrence of
    /// `x_i` receives `subs[i-1]`. All variable positions are collected
    /// before any replacement happens, so variables inside the substitutes
    /// are never captured.
    pub fn substitute_vars(&self, subs: &[Term]) -> Result<Term> {
        let occurrences = self.all_var_positions();
        let mut positions = Vec::with_capacity(occurrences.len());
        let mut reps = Vec::with_capacity(occurrences.len());
        for (p, i) in occurrences {
            let rep = subs.get(i.wrapping_sub(1)).ok_or(Error::VariableOutOfRange {
                index: i,
                nvars: subs.len(),
            })?;
            positions.push(p);
            reps.push(rep.clone());
        }
        self.substitute_positions(&positions, &reps)
    }

    /// `r(t)` and the linearity/non-deletion predicates in `n` variables.
    pub fn var_stats(&self, n: usize) -> VarStats {
        let occurrences = self.all_var_positions();
        let mut counts = vec![0usize; n + 1];
        let mut stray = false;
        for (_, i) in &occurrences {
            if *i >= 1 && *i <= n {
                counts[*i] += 1;
            } else {
                stray = true;
            }
        }
        let has_symbol = self.has_symbol();
        let non_deleting = has_symbol && !stray && counts[1..].iter().all(|&c| c >= 1);
        let linear = non_deleting && counts[1..].iter().all(|&c| c == 1);
        VarStats {
            r: occurrences.len(),
            non_deleting,
            linear,
        }
    }

    fn has_symbol(&self) -> bool {
        self.symbol().is_some() || self.children().iter().any(Term::has_symbol)
    }

    /// Parses the compact syntax `a(b(#,#),x1)`. Unquoted names of the form
    /// `x<digits>` are variables; other names may be single-quoted.
    pub fn parse(s: &str) -> Result<Term> {
        let mut p = TermParser {
            chars: s.chars().collect(),
            pos: 0,
        };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

fn is_var_token(s: &str) -> Option<usize> {
    let digits = s.strip_prefix('x')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&i| i >= 1)
}

fn needs_quotes(name: &str) -> bool {
    name.is_empty()
        || is_var_token(name).is_some()
        || name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | '\''))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.head() {
            Head::Var(i) => write!(f, "x{i}")?,
            Head::Sym(name) if needs_quotes(name) => {
                write!(f, "'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))?
            }
            Head::Sym(name) => f.write_str(name)?,
        }
        if !self.children().is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children().iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

struct TermParser {
    chars: Vec<char>,
    pos: usize,
}

impl TermParser {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in term", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        let (name, quoted) = if self.peek() == Some('\'') {
            self.pos += 1;
            let mut name = String::new();
            loop {
                match self.peek() {
                    None => return Err(self.error("unterminated quote")),
                    Some('\'') => {
                        self.pos += 1;
                        break;
                    }
                    Some('\\') => {
                        self.pos += 1;
                        let c = self.peek().ok_or_else(|| self.error("dangling escape"))?;
                        name.push(c);
                        self.pos += 1;
                    }
                    Some(c) => {
                        name.push(c);
                        self.pos += 1;
                    }
                }
            }
            (name, true)
        } else {
            let start = self.pos;
            while let Some(c) = self.peek() {
                if c.is_whitespace() || matches!(c, '(' | ')' | ',' | '\'') {
                    break;
                }
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a symbol"));
            }
            (self.chars[start..self.pos].iter().collect(), false)
        };
        self.skip_ws();
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.term()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        if !quoted {
            if let Some(i) = is_var_token(&name) {
                if !children.is_empty() {
                    return Err(self.error("variables take no arguments"));
                }
                return Ok(Term::var(i));
            }
        }
        Ok(Term::sym(name, children))
    }
}

/// All closed trees over `alphabet` with at most `max_nodes` nodes, ordered
/// by size and then by construction order.
pub fn enumerate_trees(alphabet: &RankedAlphabet, max_nodes: usize) -> Vec<Term> {
    // by_size[n] holds every tree with exactly n nodes
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_nodes + 1];
    for n in 1..=max_nodes {
        let mut here = Vec::new();
        for (name, rank) in alphabet.symbols() {
            if *rank == 0 {
                if n == 1 {
                    here.push(Term::leaf(name.clone()));
                }
                continue;
            }
            if n < 1 + rank {
                continue;
            }
            for split in compositions(n - 1, *rank) {
                let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
                for &part in &split {
                    let mut next = Vec::new();
                    for prefix in &combos {
                        for c in &by_size[part] {
                            let mut v = prefix.clone();
                            v.push(c.clone());
                            next.push(v);
                        }
                    }
                    combos = next;
                }
                here.extend(combos.into_iter().map(|cs| Term::sym(name.clone(), cs)));
            }
        }
        by_size[n] = here;
    }
    by_size.into_iter().flatten().collect()
}

/// All closed trees of height at most `max_height`.
pub fn enumerate_trees_by_height(alphabet: &RankedAlphabet, max_height: usize) -> Vec<Term> {
    let mut layers: Vec<Term> = alphabet
        .symbols()
        .iter()
        .filter(|(_, r)| *r == 0)
        .map(|(n, _)| Term::leaf(n.clone()))
        .collect();
    for _ in 0..max_height {
        let mut next: Vec<Term> = layers
            .iter()
            .filter(|t| t.children().is_empty())
            .cloned()
            .collect();
        for (name, rank) in alphabet.symbols() {
            if *rank == 0 {
                continue;
            }
            let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in 0..*rank {
                let mut grown = Vec::new();
                for prefix in &combos {
                    for c in &layers {
                        let mut v = prefix.clone();
                        v.push(c.clone());
                        grown.push(v);
                    }
                }
                combos = grown;
            }
            next.extend(combos.into_iter().map(|cs| Term::sym(name.clone(), cs)));
        }
        layers = next;
    }
    layers
}

/// Ordered ways to write `total` as `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if total < parts {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in 1..=(total - (parts - 1)) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A tree homomorphism `T_source -> T_target`, given by an image term over
/// `target ∪ {x_1..x_r}` for every source symbol of rank `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeHom {
    source: RankedAlphabet,
    target: RankedAlphabet,
    images: Vec<Term>,
}

impl TreeHom {
    pub fn new(source: RankedAlphabet, target: RankedAlphabet, images: Vec<Term>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::ArityMismatch {
                expected: source.len(),
                found: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            target.check_term(img, source.rank(i))?;
        }
        Ok(TreeHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(alphabet: &RankedAlphabet) -> Self {
        let images = alphabet
            .symbols()
            .iter()
            .map(|(n, r)| Term::sym(n.clone(), (1..=*r).map(Term::var).collect()))
            .collect();
        TreeHom {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images,
        }
    }

    pub fn source(&self) -> &RankedAlphabet {
        &self.source
    }

    pub fn target(&self) -> &RankedAlphabet {
        &self.target
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn image(&self, symbol: &str) -> Result<&Term> {
        self.source
            .index_of(symbol)
            .map(|i| &self.images[i])
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Fails with the first symbol whose image is not linear and
    /// non-deleting in its rank.
    pub fn check_linear_non_deleting(&self) -> Result<()> {
        for (i, img) in self.images.iter().enumerate() {
            let stats = img.var_stats(self.source.rank(i));
            if !stats.linear {
                return Err(Error::NotLinearNonDeleting(format!(
                    "image of `{}` is {img}",
                    self.source.name(i)
                )));
            }
        }
        Ok(())
    }

    pub fn is_linear_non_deleting(&self) -> bool {
        self.check_linear_non_deleting().is_ok()
    }

    /// `h(g(t_1..t_r)) = h(g)<h(t_1), ..., h(t_r)>`.
    pub fn apply(&self, t: &Term) -> Result<Term> {
        let mut memo = HashMap::new();
        self.apply_memo(t, &mut memo)
    }

    fn apply_memo(&self, t: &Term, memo: &mut HashMap<usize, Term>) -> Result<Term> {
        if let Some(done) = memo.get(&t.id()) {
            return Ok(done.clone());
        }
        let name = t
            .symbol()
            .ok_or_else(|| Error::UnknownSymbol(t.to_string()))?;
        let idx = self
            .source
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let rank = self.source.rank(idx);
        if rank != t.children().len() {
            return Err(Error::RankMismatch {
                symbol: name.to_string(),
                expected: rank,
                found: t.children().len(),
            });
        }
        let children = t
            .children()
            .iter()
            .map(|c| self.apply_memo(c, memo))
            .collect::<Result<Vec<_>>>()?;
        let out = self.images[idx].substitute_vars(&children)?;
        memo.insert(t.id(), out.clone());
        Ok(out)
    }
}

/// A homomorphism from words to trees: words are read as unary trees ending
/// in an end marker, each letter maps to a context over `x_1` (which may
/// occur any number of times) and the end marker maps to a closed tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordToTreeHom {
    alphabet: Vec<String>,
    target: RankedAlphabet,
    images: Vec<Term>,
    end: Term,
}

impl WordToTreeHom {
    pub fn new(
        alphabet: Vec<String>,
        target: RankedAlphabet,
        images: Vec<Term>,
        end: Term,
    ) -> Result<Self> {
        check_distinct(&alphabet, "letter")?;
        if images.len() != alphabet.len() {
            return Err(Error::ArityMismatch {
                expected: alphabet.len(),
                found: images.len(),
            });
        }
        for img in &images {
            target.check_term(img, 1)?;
        }
        target.check_term(&end, 0)?;
        Ok(WordToTreeHom {
            alphabet,
            target,
            images,
            end,
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn target(&self) -> &RankedAlphabet {
        &self.target
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn end_image(&self) -> &Term {
        &self.end
    }

    pub fn image(&self, letter: &str) -> Result<&Term> {
        self.alphabet
            .iter()
            .position(|a| a == letter)
            .map(|i| &self.images[i])
            .ok_or_else(|| Error::UnknownLetter(letter.to_string()))
    }

    /// `h(ε) = h(#)` and `h(av) = h(a)<x_1 <- h(v)>`.
    pub fn apply(&self, w: &[String]) -> Result<Term> {
        let idx = letter_index(&self.alphabet);
        let mut t = self.end.clone();
        for a in w.iter().rev() {
            let i = *idx
                .get(a.as_str())
                .ok_or_else(|| Error::UnknownLetter(a.clone()))?;
            let img = &self.images[i];
            t = img.substitute_uniform(&img.var_positions(1), &t)?;
        }
        Ok(t)
    }
}

/// A name for the end marker that does not clash with any letter: `#`
/// unless `#` is itself a letter.
pub fn end_marker(alphabet: &[String]) -> String {
    let mut name = "#".to_string();
    while alphabet.iter().any(|a| *a == name) {
        name.push('#');
    }
    name
}

/// The ranked alphabet `Σ_#^r`: every letter of rank `r` plus a nullary end
/// marker.
pub fn padded_alphabet(alphabet: &[String], r: usize) -> Result<RankedAlphabet> {
    let mut symbols: Vec<(String, usize)> = alphabet.iter().map(|a| (a.clone(), r)).collect();
    symbols.push((end_marker(alphabet), 0));
    RankedAlphabet::new(symbols)
}

/// The generic tree homomorphism of rank `r`, mapping `w` to the full
/// `r`-ary tree `t_w^r`.
pub fn generic_hom(alphabet: &[String], r: usize) -> Result<WordToTreeHom> {
    if r == 0 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: 0,
        });
    }
    let target = padded_alphabet(alphabet, r)?;
    let images = alphabet
        .iter()
        .map(|a| Term::sym(a.clone(), vec![Term::var(1); r]))
        .collect();
    let end = Term::leaf(end_marker(alphabet));
    WordToTreeHom::new(alphabet.to_vec(), target, images, end)
}

/// `h_tree ∘ h_word`, itself a word-to-tree homomorphism over the source
/// alphabet of `h_word`.
pub fn compose_word_then_tree(h_word: &WordHom, h_tree: &WordToTreeHom) -> Result<WordToTreeHom> {
    let idx = letter_index(h_tree.alphabet());
    for a in h_word.target() {
        if !idx.contains_key(a.as_str()) {
            return Err(Error::UnknownLetter(a.clone()));
        }
    }
    let mut images = Vec::with_capacity(h_word.source().len());
    for img in h_word.images() {
        let mut ctx = Term::var(1);
        for a in img.iter().rev() {
            let letter_img = &h_tree.images()[idx[a.as_str()]];
            ctx = letter_img.substitute_uniform(&letter_img.var_positions(1), &ctx)?;
        }
        images.push(ctx);
    }
    WordToTreeHom::new(
        h_word.source().to_vec(),
        h_tree.target().clone(),
        images,
        h_tree.end_image().clone(),
    )
}

/// Convenience: the word `w` as the tree `t_w^r`.
pub fn word_tree(alphabet: &[String], w: &Word, r: usize) -> Result<Term> {
    generic_hom(alphabet, r)?.apply(w)
}
