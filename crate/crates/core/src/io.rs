//! JSON documents for every model, distinguished by a top-level `kind`.
//!
//! Scalars are strings in the carrier's syntax. A polynomial is an array of
//! `{coeff, exps}` objects with 1-based variable indices as keys; on input
//! a string in infix syntax over the relevant names is accepted as well.
//! Trees are `{sym, children}` / `{var}` objects, or compact strings.

use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::poly_automata::Pa;
use crate::polynomial::{Exponents, Polynomial};
use crate::semiring::{Semiring, Value};
use crate::transforms::{NivatDecomposition, NivatSymbol};
use crate::trees::{Head, RankedAlphabet, Term, TreeHom, WordToTreeHom};
use crate::wafa::Wafa;
use crate::wfta::{StepFunction, Transition, Wfta};
use crate::words::{Word, WordHom};

/// Any homomorphism that can appear in a `hom` document.
#[derive(Clone, Debug)]
pub enum Hom {
    Word(WordHom),
    Tree(TreeHom),
    WordToTree(WordToTreeHom),
}

#[derive(Clone, Debug)]
pub enum Document {
    Wafa(Wafa),
    Wfta(Wfta),
    Pa(Pa),
    Hom(Hom),
    Step(StepFunction),
    Nivat(NivatDecomposition),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Wafa(_) => "wafa",
            Document::Wfta(_) => "wfta",
            Document::Pa(_) => "pa",
            Document::Hom(_) => "hom",
            Document::Step(_) => "step",
            Document::Nivat(_) => "nivat",
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Document::Wafa(a) => wafa_to_json(a),
            Document::Wfta(b) => wfta_to_json(b),
            Document::Pa(p) => pa_to_json(p),
            Document::Hom(h) => hom_to_json(h),
            Document::Step(s) => step_to_json(s),
            Document::Nivat(d) => nivat_to_json(d),
        }
    }

    pub fn from_json(doc: &Json) -> Result<Document> {
        let kind = field(doc, "kind")?
            .as_str()
            .ok_or_else(|| perr("`kind` must be a string"))?;
        match kind {
            "wafa" => wafa_from_json(doc).map(Document::Wafa),
            "wfta" => wfta_from_json(doc).map(Document::Wfta),
            "pa" => pa_from_json(doc).map(Document::Pa),
            "hom" => hom_from_json(doc).map(Document::Hom),
            "step" => step_from_json(doc).map(Document::Step),
            "nivat" => nivat_from_json(doc).map(Document::Nivat),
            other => Err(perr(format!("unknown document kind `{other}`"))),
        }
    }

    pub fn parse(text: &str) -> Result<Document> {
        let doc: Json = serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {e}")))?;
        Document::from_json(&doc)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("documents serialize")
    }
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(doc: &'a Json, key: &str) -> Result<&'a Json> {
    doc.get(key).ok_or_else(|| perr(format!("missing field `{key}`")))
}

fn as_object<'a>(j: &'a Json, what: &str) -> Result<&'a Map<String, Json>> {
    j.as_object().ok_or_else(|| perr(format!("{what} must be an object")))
}

fn as_array<'a>(j: &'a Json, what: &str) -> Result<&'a Vec<Json>> {
    j.as_array().ok_or_else(|| perr(format!("{what} must be an array")))
}

fn as_str<'a>(j: &'a Json, what: &str) -> Result<&'a str> {
    j.as_str().ok_or_else(|| perr(format!("{what} must be a string")))
}

fn strings(j: &Json, what: &str) -> Result<Vec<String>> {
    as_array(j, what)?
        .iter()
        .map(|s| as_str(s, what).map(str::to_string))
        .collect()
}

fn index_in(names: &[String], name: &str, what: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| perr(format!("unknown {what} `{name}`")))
}

// ---- carriers and values ----

pub fn ring_to_json(ring: &Semiring) -> Json {
    match ring {
        Semiring::Polynomial { base, vars } => json!({
            "tag": "polynomial",
            "base": ring_to_json(base),
            "vars": vars,
        }),
        other => json!(other.tag()),
    }
}

pub fn ring_from_json(j: &Json) -> Result<Semiring> {
    if let Some(tag) = j.as_str() {
        return match tag {
            "boolean" => Ok(Semiring::Boolean),
            "natural" => Ok(Semiring::Natural),
            "rational" => Ok(Semiring::Rational),
            other => Err(perr(format!("unknown ring `{other}`"))),
        };
    }
    if as_str(field(j, "tag")?, "ring tag")? != "polynomial" {
        return Err(perr("object rings must have tag `polynomial`"));
    }
    Ok(Semiring::Polynomial {
        base: Box::new(ring_from_json(field(j, "base")?)?),
        vars: strings(field(j, "vars")?, "ring variables")?,
    })
}

pub fn value_to_json(ring: &Semiring, v: &Value) -> Json {
    match (ring, v) {
        (Semiring::Polynomial { base, .. }, Value::Poly(p)) => poly_to_json(base, p),
        _ => json!(ring.format_value(v)),
    }
}

pub fn value_from_json(ring: &Semiring, j: &Json) -> Result<Value> {
    match ring {
        Semiring::Polynomial { base, vars } => {
            let p = poly_from_json(base, vars, j)?;
            Ok(Value::Poly(Box::new(p)))
        }
        _ => ring.parse_value(as_str(j, "value")?),
    }
}

/// Serializes a polynomial whose coefficients live in `coeff_ring`.
pub fn poly_to_json(coeff_ring: &Semiring, p: &Polynomial) -> Json {
    Json::Array(
        p.monomials()
            .iter()
            .map(|m| {
                let exps: Map<String, Json> = m
                    .exps
                    .iter()
                    .map(|(v, e)| ((v + 1).to_string(), json!(e)))
                    .collect();
                json!({ "coeff": value_to_json(coeff_ring, &m.coeff), "exps": exps })
            })
            .collect(),
    )
}

/// Reads a polynomial over `coeff_ring` in the variables `names`.
pub fn poly_from_json(coeff_ring: &Semiring, names: &[String], j: &Json) -> Result<Polynomial> {
    if let Some(text) = j.as_str() {
        return Polynomial::parse(coeff_ring, names, text);
    }
    let mut terms = Vec::new();
    for m in as_array(j, "polynomial")? {
        let coeff = value_from_json(coeff_ring, field(m, "coeff")?)?;
        let mut pairs = Vec::new();
        if let Some(exps) = m.get("exps") {
            for (k, e) in as_object(exps, "exps")? {
                let v: usize = k
                    .parse()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| perr(format!("bad variable index `{k}`")))?;
                let e = e
                    .as_u64()
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| perr("exponents must be small non-negative integers"))?;
                pairs.push((v - 1, e));
            }
        }
        terms.push((coeff, Exponents::from_pairs(pairs)?));
    }
    Polynomial::from_terms(coeff_ring.clone(), names.len(), terms)
}

// ---- trees and alphabets ----

pub fn term_to_json(t: &Term) -> Json {
    match t.head() {
        Head::Var(i) => json!({ "var": i }),
        Head::Sym(s) => {
            let children: Vec<Json> = t.children().iter().map(term_to_json).collect();
            json!({ "sym": s, "children": children })
        }
    }
}

pub fn term_from_json(j: &Json) -> Result<Term> {
    if let Some(text) = j.as_str() {
        return Term::parse(text);
    }
    if let Some(v) = j.get("var") {
        let i = v
            .as_u64()
            .filter(|&i| i >= 1)
            .ok_or_else(|| perr("variable indices start at 1"))?;
        return Ok(Term::var(i as usize));
    }
    let sym = as_str(field(j, "sym")?, "symbol")?;
    let children = match j.get("children") {
        Some(c) => as_array(c, "children")?
            .iter()
            .map(term_from_json)
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    Ok(Term::sym(sym, children))
}

pub fn alphabet_to_json(alpha: &RankedAlphabet) -> Json {
    Json::Array(
        alpha
            .symbols()
            .iter()
            .map(|(name, rank)| json!({ "name": name, "rank": rank }))
            .collect(),
    )
}

pub fn alphabet_from_json(j: &Json) -> Result<RankedAlphabet> {
    let mut symbols = Vec::new();
    for s in as_array(j, "ranked alphabet")? {
        let name = as_str(field(s, "name")?, "symbol name")?.to_string();
        let rank = field(s, "rank")?
            .as_u64()
            .ok_or_else(|| perr("rank must be a non-negative integer"))?;
        symbols.push((name, rank as usize));
    }
    RankedAlphabet::new(symbols)
}

fn word_to_json(w: &[String]) -> Json {
    json!(w)
}

fn word_from_json(j: &Json, alphabet: &[String]) -> Result<Word> {
    match j.as_str() {
        Some(text) => parse_word(alphabet, text),
        None => strings(j, "word"),
    }
}

/// Splits `text` into letters of `alphabet`. Whitespace- or comma-separated
/// input is split at the separators; otherwise the longest letter matching
/// at each point is taken.
pub fn parse_word(alphabet: &[String], text: &str) -> Result<Word> {
    let text = text.trim();
    let check = |w: Word| -> Result<Word> {
        match w.iter().find(|a| !alphabet.contains(a)) {
            Some(a) => Err(Error::UnknownLetter(a.clone())),
            None => Ok(w),
        }
    };
    if text.contains(|c: char| c.is_whitespace() || c == ',') {
        let w = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        return check(w);
    }
    let mut rest = text;
    let mut w = Vec::new();
    while !rest.is_empty() {
        let best = alphabet
            .iter()
            .filter(|a| !a.is_empty() && rest.starts_with(a.as_str()))
            .max_by_key(|a| a.len())
            .ok_or_else(|| Error::UnknownLetter(rest.chars().next().unwrap().to_string()))?;
        w.push(best.clone());
        rest = &rest[best.len()..];
    }
    Ok(w)
}

// ---- automata ----

pub fn wafa_to_json(a: &Wafa) -> Json {
    let ring = a.ring();
    let mut delta = Map::new();
    for (qi, q) in a.states().iter().enumerate() {
        let mut row = Map::new();
        for (ai, letter) in a.alphabet().iter().enumerate() {
            let p = a.delta(qi, ai);
            if !p.is_zero() {
                row.insert(letter.clone(), poly_to_json(ring, p));
            }
        }
        delta.insert(q.clone(), Json::Object(row));
    }
    let tau: Map<String, Json> = a
        .states()
        .iter()
        .zip(a.tau())
        .map(|(q, v)| (q.clone(), value_to_json(ring, v)))
        .collect();
    json!({
        "kind": "wafa",
        "ring": ring_to_json(ring),
        "states": a.states(),
        "alphabet": a.alphabet(),
        "P0": poly_to_json(ring, a.p0()),
        "delta": delta,
        "tau": tau,
    })
}

/// Missing `delta` entries and `tau` values are zero.
pub fn wafa_from_json(doc: &Json) -> Result<Wafa> {
    let ring = ring_from_json(field(doc, "ring")?)?;
    let states = strings(field(doc, "states")?, "states")?;
    let alphabet = strings(field(doc, "alphabet")?, "alphabet")?;
    let n = states.len();
    let p0 = poly_from_json(&ring, &states, field(doc, "P0")?)?;
    let mut delta = vec![vec![Polynomial::zero(ring.clone(), n); alphabet.len()]; n];
    if let Some(d) = doc.get("delta") {
        for (q, row) in as_object(d, "delta")? {
            let qi = index_in(&states, q, "state")?;
            for (a, p) in as_object(row, "delta row")? {
                let ai = index_in(&alphabet, a, "letter")?;
                delta[qi][ai] = poly_from_json(&ring, &states, p)?;
            }
        }
    }
    let mut tau = vec![ring.zero(); n];
    if let Some(t) = doc.get("tau") {
        for (q, v) in as_object(t, "tau")? {
            tau[index_in(&states, q, "state")?] = value_from_json(&ring, v)?;
        }
    }
    Wafa::new(ring, states, alphabet, p0, delta, tau)
}

fn wfta_body(b: &Wfta) -> Map<String, Json> {
    let ring = b.ring();
    let states = b.states();
    let delta: Vec<Json> = b
        .transitions()
        .iter()
        .map(|t| {
            let from: Vec<&String> = t.from.iter().map(|&p| &states[p]).collect();
            json!({
                "sym": t.symbol,
                "from": from,
                "to": states[t.to],
                "weight": value_to_json(ring, &t.weight),
            })
        })
        .collect();
    let lambda: Map<String, Json> = states
        .iter()
        .zip(b.lambda())
        .filter(|(_, v)| !v.is_zero())
        .map(|(q, v)| (q.clone(), value_to_json(ring, v)))
        .collect();
    let mut m = Map::new();
    m.insert("ring".into(), ring_to_json(ring));
    m.insert("states".into(), json!(states));
    m.insert("alphabet".into(), alphabet_to_json(b.alphabet()));
    m.insert("delta".into(), Json::Array(delta));
    m.insert("lambda".into(), Json::Object(lambda));
    m
}

pub fn wfta_to_json(b: &Wfta) -> Json {
    let mut m = Map::new();
    m.insert("kind".into(), json!("wfta"));
    m.extend(wfta_body(b));
    Json::Object(m)
}

pub fn wfta_from_json(doc: &Json) -> Result<Wfta> {
    let ring = ring_from_json(field(doc, "ring")?)?;
    let states = strings(field(doc, "states")?, "states")?;
    let alphabet = alphabet_from_json(field(doc, "alphabet")?)?;
    let mut transitions = Vec::new();
    if let Some(d) = doc.get("delta") {
        for t in as_array(d, "delta")? {
            let from = strings(field(t, "from")?, "from")?
                .iter()
                .map(|p| index_in(&states, p, "state"))
                .collect::<Result<_>>()?;
            transitions.push(Transition {
                symbol: as_str(field(t, "sym")?, "sym")?.to_string(),
                from,
                to: index_in(&states, as_str(field(t, "to")?, "to")?, "state")?,
                weight: match t.get("weight") {
                    Some(w) => value_from_json(&ring, w)?,
                    None => ring.one(),
                },
            });
        }
    }
    let mut lambda = vec![ring.zero(); states.len()];
    if let Some(l) = doc.get("lambda") {
        for (q, v) in as_object(l, "lambda")? {
            lambda[index_in(&states, q, "state")?] = value_from_json(&ring, v)?;
        }
    }
    Wfta::new(ring, states, alphabet, transitions, lambda)
}

pub fn pa_to_json(p: &Pa) -> Json {
    let ring = p.ring();
    let updates: Map<String, Json> = p
        .alphabet()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let row: Vec<Json> = p.update(ai).iter().map(|u| poly_to_json(ring, u)).collect();
            (a.clone(), Json::Array(row))
        })
        .collect();
    let alpha: Vec<Json> = p.alpha().iter().map(|v| value_to_json(ring, v)).collect();
    json!({
        "kind": "pa",
        "ring": ring_to_json(ring),
        "n": p.num_registers(),
        "registers": p.registers(),
        "alphabet": p.alphabet(),
        "alpha": alpha,
        "p": updates,
        "gamma": poly_to_json(ring, p.gamma()),
    })
}

/// Register names are optional and default to `x1..xn`.
pub fn pa_from_json(doc: &Json) -> Result<Pa> {
    let ring = ring_from_json(field(doc, "ring")?)?;
    let n = field(doc, "n")?
        .as_u64()
        .ok_or_else(|| perr("`n` must be a non-negative integer"))? as usize;
    let registers = match doc.get("registers") {
        Some(r) => strings(r, "registers")?,
        None => (1..=n).map(|i| format!("x{i}")).collect(),
    };
    if registers.len() != n {
        return Err(perr(format!("{} register names for n = {n}", registers.len())));
    }
    let alphabet = strings(field(doc, "alphabet")?, "alphabet")?;
    let alpha = as_array(field(doc, "alpha")?, "alpha")?
        .iter()
        .map(|v| value_from_json(&ring, v))
        .collect::<Result<Vec<_>>>()?;
    let p = as_object(field(doc, "p")?, "p")?;
    let mut updates = Vec::new();
    for a in &alphabet {
        let row = p
            .get(a)
            .ok_or_else(|| perr(format!("no update for letter `{a}`")))?;
        updates.push(
            as_array(row, "update")?
                .iter()
                .map(|u| poly_from_json(&ring, &registers, u))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if let Some(extra) = p.keys().find(|k| !alphabet.contains(k)) {
        return Err(Error::UnknownLetter(extra.clone()));
    }
    let gamma = poly_from_json(&ring, &registers, field(doc, "gamma")?)?;
    Pa::new(ring, registers, alphabet, alpha, updates, gamma)
}

// ---- homomorphisms ----

fn hom_body(h: &Hom) -> Map<String, Json> {
    let mut m = Map::new();
    match h {
        Hom::Word(h) => {
            let images: Map<String, Json> = h
                .source()
                .iter()
                .zip(h.images())
                .map(|(a, w)| (a.clone(), word_to_json(w)))
                .collect();
            m.insert("type".into(), json!("word"));
            m.insert("source".into(), json!(h.source()));
            m.insert("target".into(), json!(h.target()));
            m.insert("images".into(), Json::Object(images));
        }
        Hom::Tree(h) => {
            let images: Map<String, Json> = h
                .source()
                .symbols()
                .iter()
                .zip(h.images())
                .map(|((f, _), t)| (f.clone(), term_to_json(t)))
                .collect();
            m.insert("type".into(), json!("tree"));
            m.insert("source".into(), alphabet_to_json(h.source()));
            m.insert("target".into(), alphabet_to_json(h.target()));
            m.insert("images".into(), Json::Object(images));
        }
        Hom::WordToTree(h) => {
            let images: Map<String, Json> = h
                .alphabet()
                .iter()
                .zip(h.images())
                .map(|(a, t)| (a.clone(), term_to_json(t)))
                .collect();
            m.insert("type".into(), json!("word-to-tree"));
            m.insert("source".into(), json!(h.alphabet()));
            m.insert("target".into(), alphabet_to_json(h.target()));
            m.insert("images".into(), Json::Object(images));
            m.insert("end".into(), term_to_json(h.end_image()));
        }
    }
    m
}

pub fn hom_to_json(h: &Hom) -> Json {
    let mut m = Map::new();
    m.insert("kind".into(), json!("hom"));
    m.extend(hom_body(h));
    Json::Object(m)
}

fn images_in_order<'a>(images: &'a Map<String, Json>, names: &[String]) -> Result<Vec<&'a Json>> {
    if let Some(extra) = images.keys().find(|k| !names.contains(k)) {
        return Err(Error::UnknownSymbol(extra.clone()));
    }
    names
        .iter()
        .map(|a| images.get(a).ok_or_else(|| perr(format!("no image for `{a}`"))))
        .collect()
}

pub fn hom_from_json(doc: &Json) -> Result<Hom> {
    let images = as_object(field(doc, "images")?, "images")?;
    match as_str(field(doc, "type")?, "hom type")? {
        "word" => {
            let source = strings(field(doc, "source")?, "source")?;
            let target = strings(field(doc, "target")?, "target")?;
            let imgs = images_in_order(images, &source)?
                .into_iter()
                .map(|w| word_from_json(w, &target))
                .collect::<Result<_>>()?;
            WordHom::new(source, target, imgs).map(Hom::Word)
        }
        "tree" => {
            let source = alphabet_from_json(field(doc, "source")?)?;
            let target = alphabet_from_json(field(doc, "target")?)?;
            let names: Vec<String> = source.symbols().iter().map(|(f, _)| f.clone()).collect();
            let imgs = images_in_order(images, &names)?
                .into_iter()
                .map(term_from_json)
                .collect::<Result<_>>()?;
            TreeHom::new(source, target, imgs).map(Hom::Tree)
        }
        "word-to-tree" => {
            let source = strings(field(doc, "source")?, "source")?;
            let target = alphabet_from_json(field(doc, "target")?)?;
            let imgs = images_in_order(images, &source)?
                .into_iter()
                .map(term_from_json)
                .collect::<Result<_>>()?;
            let end = term_from_json(field(doc, "end")?)?;
            WordToTreeHom::new(source, target, imgs, end).map(Hom::WordToTree)
        }
        other => Err(perr(format!("unknown hom type `{other}`"))),
    }
}

// ---- step functions and decompositions ----

pub fn step_to_json(s: &StepFunction) -> Json {
    let parts: Vec<Json> = s
        .parts()
        .iter()
        .map(|(l, v)| {
            json!({
                "weight": value_to_json(s.ring(), v),
                "language": Json::Object(wfta_body(l)),
            })
        })
        .collect();
    json!({
        "kind": "step",
        "ring": ring_to_json(s.ring()),
        "alphabet": alphabet_to_json(s.alphabet()),
        "parts": parts,
    })
}

pub fn step_from_json(doc: &Json) -> Result<StepFunction> {
    let ring = ring_from_json(field(doc, "ring")?)?;
    let alphabet = alphabet_from_json(field(doc, "alphabet")?)?;
    let parts = as_array(field(doc, "parts")?, "parts")?
        .iter()
        .map(|p| {
            let l = wfta_from_json(field(p, "language")?)?;
            let v = value_from_json(&ring, field(p, "weight")?)?;
            Ok((l, v))
        })
        .collect::<Result<_>>()?;
    StepFunction::new(ring, alphabet, parts)
}

pub fn nivat_to_json(d: &NivatDecomposition) -> Json {
    let symbols: Vec<Json> = d
        .symbols
        .iter()
        .map(|s| json!({ "from": s.from, "sym": s.symbol, "to": s.target, "root": s.root }))
        .collect();
    json!({
        "kind": "nivat",
        "alphabet": alphabet_to_json(&d.alphabet),
        "symbols": symbols,
        "h": Json::Object(hom_body(&Hom::Tree(d.h.clone()))),
        "L": Json::Object(wfta_body(&d.l)),
        "Aw": Json::Object(wfta_body(&d.aw)),
    })
}

pub fn nivat_from_json(doc: &Json) -> Result<NivatDecomposition> {
    let alphabet = alphabet_from_json(field(doc, "alphabet")?)?;
    let mut symbols = Vec::new();
    for s in as_array(field(doc, "symbols")?, "symbols")? {
        let from = as_array(field(s, "from")?, "from")?
            .iter()
            .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| perr("state indices")))
            .collect::<Result<_>>()?;
        symbols.push(NivatSymbol {
            from,
            symbol: as_str(field(s, "sym")?, "sym")?.to_string(),
            target: field(s, "to")?.as_u64().ok_or_else(|| perr("state index"))? as usize,
            root: field(s, "root")?.as_bool().ok_or_else(|| perr("`root` must be a boolean"))?,
        });
    }
    if symbols.len() != alphabet.len() {
        return Err(perr("one annotation per decomposition symbol expected"));
    }
    let h = match hom_from_json(field(doc, "h")?)? {
        Hom::Tree(h) => h,
        _ => return Err(perr("`h` must be a tree homomorphism")),
    };
    let d = NivatDecomposition {
        alphabet,
        symbols,
        h,
        l: wfta_from_json(field(doc, "L")?)?,
        aw: wfta_from_json(field(doc, "Aw")?)?,
    };
    if d.aw.num_states() != 1 {
        return Err(Error::InvalidAutomaton("the weight automaton must have one state".into()));
    }
    Ok(d)
}
