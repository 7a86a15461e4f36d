//! Rewrite rules over terms and the reduction strategy.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::parse::{parse_term, parse_term_as};
use super::term::{crosses, word_adjoint, word_measure, word_string, Term, Word};
use super::SymbolicError;

/// Shipped axiom set.
pub const DEFAULT_AXIOMS: &str = include_str!("axioms.rules");

/// Identifier of the crossing schema.
pub const KILL: &str = "KILL";

pub const DEFAULT_STEP_LIMIT: usize = 100_000;

/// `lhs → rhs` where `lhs` is a single word.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub id: String,
    /// Generated by adjoint closure from the rule with the same id.
    pub adjoint: bool,
    pub lhs: Word,
    pub rhs: Term,
}

impl Rule {
    pub fn label(&self) -> String {
        if self.adjoint {
            format!("{}*", self.id)
        } else {
            self.id.clone()
        }
    }

    pub fn star(&self) -> Rule {
        Rule {
            id: self.id.clone(),
            adjoint: !self.adjoint,
            lhs: word_adjoint(&self.lhs),
            rhs: self.rhs.adjoint(),
        }
    }

    /// Every right-hand monomial is smaller than the left-hand side in
    /// (weight, tilde count), lexicographically.
    pub fn decreases(&self) -> bool {
        let m = word_measure(&self.lhs);
        self.rhs.monomials().all(|(w, _)| word_measure(w) < m)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.label(), word_string(&self.lhs), self.rhs)
    }
}

/// Ordered rules plus the crossing schema.
#[derive(Clone, Debug, PartialEq)]
pub struct RewriteSystem {
    pub rules: Vec<Rule>,
    pub kill: bool,
    pub step_limit: usize,
}

impl Default for RewriteSystem {
    fn default() -> Self {
        Self::parse(DEFAULT_AXIOMS).expect("shipped axioms parse")
    }
}

impl RewriteSystem {
    /// Parses the rule DSL: one `ID: LHS -> RHS` per line, `#` comments.
    /// Without `ID:` the rule is named `R<line>`. The line `KILL: crossing -> 0` enables the crossing schema. Adjoints
    /// of all rules are appended, in order, after the originals.
    pub fn parse(text: &str) -> Result<Self, SymbolicError> {
        let mut rules = Vec::new();
        let mut kill = false;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| SymbolicError::Rule { line: n + 1, message };
            let auto = format!("R{}", n + 1);
            let (id, body) = line.split_once(':').unwrap_or((&auto, line));
            let id = id.trim();
            if id.is_empty() || id.contains(char::is_whitespace) {
                return Err(bad(format!("invalid rule id {id:?}")));
            }
            let (lhs, rhs) = body.split_once("->").ok_or_else(|| bad("missing `->`".into()))?;
            if id == KILL {
                if lhs.trim() != "crossing" || rhs.trim() != "0" {
                    return Err(bad("the KILL schema is written `KILL: crossing -> 0`".into()));
                }
                kill = true;
                continue;
            }
            let lt = parse_term(lhs).map_err(|e| bad(e.to_string()))?;
            let mut mons = lt.monomials();
            let lhs_word = match (mons.next(), mons.next()) {
                (Some((w, c)), None) if c.is_one() && !w.is_empty() => w.clone(),
                _ => return Err(bad("left-hand side must be a single word".into())),
            };
            let rhs = parse_term_as(rhs, lt.signature()).map_err(|e| bad(e.to_string()))?;
            rules.push(Rule {
                id: id.to_string(),
                adjoint: false,
                lhs: lhs_word,
                rhs,
            });
        }
        let closure: Vec<Rule> = rules
            .iter()
            .map(Rule::star)
            .filter(|r| !rules.iter().any(|o| o.lhs == r.lhs))
            .collect();
        rules.extend(closure);
        Ok(Self {
            rules,
            kill,
            step_limit: DEFAULT_STEP_LIMIT,
        })
    }

    pub fn ids(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rules {
            if !out.contains(&r.id) {
                out.push(r.id.clone());
            }
        }
        if self.kill {
            out.push(KILL.into());
        }
        out
    }

    /// The system with every rule of the given id removed.
    pub fn without(&self, id: &str) -> Result<Self, SymbolicError> {
        if id == KILL {
            if !self.kill {
                return Err(SymbolicError::UnknownAxiom(id.into()));
            }
            return Ok(Self {
                kill: false,
                ..self.clone()
            });
        }
        if !self.rules.iter().any(|r| r.id == id) {
            return Err(SymbolicError::UnknownAxiom(id.into()));
        }
        Ok(Self {
            rules: self.rules.iter().filter(|r| r.id != id).cloned().collect(),
            ..self.clone()
        })
    }

    /// The system with rule groups listed in the given id order.
    pub fn reordered(&self, order: &[String]) -> Self {
        let mut rules = Vec::with_capacity(self.rules.len());
        for id in order {
            rules.extend(self.rules.iter().filter(|r| &r.id == id).cloned());
        }
        Self { rules, ..self.clone() }
    }
}

/// One rewrite: which rule, on which monomial, at which offset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub monomial: String,
    pub position: usize,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub term: Term,
    pub steps: Vec<Step>,
}

/// Rewrites to a normal form. Crossing monomials are removed first; then
/// the first rule in priority order that matches anywhere is applied at its
/// leftmost match in the first such monomial.
pub fn reduce(term: &Term, rs: &RewriteSystem) -> Result<Reduction, SymbolicError> {
    let mut t = term.clone();
    let mut steps = Vec::new();
    loop {
        if steps.len() >= rs.step_limit {
            return Err(SymbolicError::StepLimit(rs.step_limit));
        }
        if rs.kill {
            let dead = t.monomials().map(|(w, _)| w).find(|w| crosses(w)).cloned();
            if let Some(w) = dead {
                t.remove_monomial(&w);
                steps.push(Step {
                    rule: KILL.into(),
                    monomial: word_string(&w),
                    position: 0,
                });
                continue;
            }
        }
        let redex = rs.rules.iter().find_map(|r| {
            t.monomials().find_map(|(w, _)| {
                w.windows(r.lhs.len())
                    .position(|sub| sub == r.lhs.as_slice())
                    .map(|pos| (r, w.clone(), pos))
            })
        });
        let Some((rule, w, pos)) = redex else {
            return Ok(Reduction { term: t, steps });
        };
        let c = t.remove_monomial(&w).expect("redex monomial present");
        let prefix = &w[..pos];
        let suffix = &w[pos + rule.lhs.len()..];
        for (mid, rc) in rule.rhs.monomials() {
            let mut nw = prefix.to_vec();
            nw.extend_from_slice(mid);
            nw.extend_from_slice(suffix);
            t.add_monomial(nw, &c * rc);
        }
        steps.push(Step {
            rule: rule.label(),
            monomial: word_string(&w),
            position: pos,
        });
    }
}
