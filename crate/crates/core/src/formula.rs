//! Propositional formulas over a finite alphabet and their classical
//! two-valued semantics.

use crate::error::{Error, Result};
use crate::worlds::{World, WorldSet};
use std::collections::HashMap;
use std::fmt;

/// Largest alphabet for which the brute-force world scans are allowed.
pub const ENUMERATION_CAP: usize = 24;

const MAX_PROPS: usize = 63;

/// An ordered list of distinct proposition names. The order fixes the bit
/// position of each proposition inside a [`World`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    props: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(props: impl IntoIterator<Item = S>) -> Result<Self> {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        if props.is_empty() {
            return Err(Error::InvalidAlphabet("no propositions".into()));
        }
        if props.len() > MAX_PROPS {
            return Err(Error::AlphabetTooLarge {
                size: props.len(),
                cap: MAX_PROPS,
            });
        }
        let mut index = HashMap::with_capacity(props.len());
        for (i, p) in props.iter().enumerate() {
            if !is_identifier(p) {
                return Err(Error::InvalidAlphabet(format!("`{p}` is not a proposition name")));
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate proposition `{p}`")));
            }
        }
        Ok(Alphabet { props, index })
    }

    /// Alphabet made of the propositions of `formulas`, in order of first
    /// appearance.
    pub fn covering<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        for f in formulas {
            for p in f.props() {
                if !names.iter().any(|n| n == p) {
                    names.push(p.to_string());
                }
            }
        }
        Self::new(names)
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Number of worlds, `2^|Φ|`.
    pub fn world_count(&self) -> usize {
        1usize << self.props.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.world_count() as u64).map(World)
    }

    pub fn check_cap(&self, cap: usize) -> Result<()> {
        if self.len() > cap {
            Err(Error::AlphabetTooLarge { size: self.len(), cap })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic() || b == b'_')
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
        && s != "true"
        && s != "false"
}

/// Propositional formula. `Or`, `Implies`, `True` and `False` are sugar:
/// they evaluate exactly like their ∧/¬ expansions (see [`Formula::expand`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Proposition names in order of first appearance (with repeats removed).
    pub fn props(&self) -> Vec<&str> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a str>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Prop(p) => {
                    if !out.contains(&p.as_str()) {
                        out.push(p);
                    }
                }
                Formula::Not(a) => walk(a, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Rewrites derived connectives into the `{∧, ¬}` signature:
    /// `a ∨ b ≡ ¬(¬a ∧ ¬b)`, `a → b ≡ ¬(a ∧ ¬b)`, `⊤ ≡ ¬(p₁ ∧ ¬p₁)` and
    /// `⊥ ≡ p₁ ∧ ¬p₁` where `p₁` is the first proposition of `alphabet`.
    pub fn expand(&self, alphabet: &Alphabet) -> Formula {
        let first = || Formula::prop(alphabet.props()[0].clone());
        let contradiction = || Formula::and(first(), Formula::not(first()));
        match self {
            Formula::True => Formula::not(contradiction()),
            Formula::False => contradiction(),
            Formula::Prop(p) => Formula::Prop(p.clone()),
            Formula::Not(a) => Formula::not(a.expand(alphabet)),
            Formula::And(a, b) => Formula::and(a.expand(alphabet), b.expand(alphabet)),
            Formula::Or(a, b) => Formula::not(Formula::and(
                Formula::not(a.expand(alphabet)),
                Formula::not(b.expand(alphabet)),
            )),
            Formula::Implies(a, b) => Formula::not(Formula::and(a.expand(alphabet), Formula::not(b.expand(alphabet)))),
        }
    }

    /// Like [`Formula::expand`] but independent of any alphabet: `⊤` stays
    /// and `⊥` becomes `¬⊤`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::not(Formula::True),
            Formula::Prop(p) => Formula::Prop(p.clone()),
            Formula::Not(a) => Formula::not(a.desugar()),
            Formula::And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => Formula::not(Formula::and(Formula::not(a.desugar()), Formula::not(b.desugar()))),
            Formula::Implies(a, b) => Formula::not(Formula::and(a.desugar(), Formula::not(b.desugar()))),
        }
    }

    pub fn is_core(&self) -> bool {
        match self {
            Formula::Prop(_) => true,
            Formula::Not(a) => a.is_core(),
            Formula::And(a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    pub(crate) fn bind(&self, alphabet: &Alphabet) -> Result<Bound> {
        Ok(match self {
            Formula::True => Bound::Const(true),
            Formula::False => Bound::Const(false),
            Formula::Prop(p) => Bound::Prop(
                alphabet
                    .position(p)
                    .ok_or_else(|| Error::UnknownProposition(p.clone()))?,
            ),
            Formula::Not(a) => Bound::Not(Box::new(a.bind(alphabet)?)),
            Formula::And(a, b) => Bound::And(Box::new(a.bind(alphabet)?), Box::new(b.bind(alphabet)?)),
            Formula::Or(a, b) => Bound::Or(Box::new(a.bind(alphabet)?), Box::new(b.bind(alphabet)?)),
            Formula::Implies(a, b) => Bound::Implies(Box::new(a.bind(alphabet)?), Box::new(b.bind(alphabet)?)),
        })
    }
}

/// A formula whose propositions are resolved to alphabet positions.
#[derive(Debug, Clone)]
pub(crate) enum Bound {
    Const(bool),
    Prop(usize),
    Not(Box<Bound>),
    And(Box<Bound>, Box<Bound>),
    Or(Box<Bound>, Box<Bound>),
    Implies(Box<Bound>, Box<Bound>),
}

impl Bound {
    pub(crate) fn eval(&self, w: World) -> bool {
        match self {
            Bound::Const(b) => *b,
            Bound::Prop(i) => w.get(*i),
            Bound::Not(a) => !a.eval(w),
            Bound::And(a, b) => a.eval(w) && b.eval(w),
            Bound::Or(a, b) => a.eval(w) || b.eval(w),
            Bound::Implies(a, b) => !a.eval(w) || b.eval(w),
        }
    }
}

/// Classical truth value of `f` at world `w`.
pub fn eval_world(f: &Formula, w: World, alphabet: &Alphabet) -> Result<bool> {
    Ok(f.bind(alphabet)?.eval(w))
}

/// The worlds of `alphabet` at which `f` is true.
pub fn models(f: &Formula, alphabet: &Alphabet) -> Result<WorldSet> {
    alphabet.check_cap(ENUMERATION_CAP)?;
    let bound = f.bind(alphabet)?;
    let mut set = WorldSet::empty(alphabet.world_count());
    for w in alphabet.worlds() {
        if bound.eval(w) {
            set.insert(w);
        }
    }
    Ok(set)
}

/// Logical equivalence by scanning every world of `alphabet`.
pub fn equivalent(f: &Formula, g: &Formula, alphabet: &Alphabet) -> Result<bool> {
    alphabet.check_cap(ENUMERATION_CAP)?;
    let bf = f.bind(alphabet)?;
    let bg = g.bind(alphabet)?;
    Ok(alphabet.worlds().all(|w| bf.eval(w) == bg.eval(w)))
}

/// Fully parenthesised: every binary connective gets its own parentheses.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Prop(p) => f.write_str(p),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}
