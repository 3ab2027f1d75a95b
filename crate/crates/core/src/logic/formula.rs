use std::fmt;

use super::signature::{PlayerId, Signature, VarId};

/// Epistemic goal formulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Atom(VarId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    K(PlayerId, Box<Formula>),
    KHat(PlayerId, Box<Formula>),
    Kw(PlayerId, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(v: VarId) -> Self {
        Atom(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Iff(Box::new(a), Box::new(b))
    }

    pub fn k(i: PlayerId, f: Formula) -> Self {
        K(i, Box::new(f))
    }

    pub fn khat(i: PlayerId, f: Formula) -> Self {
        KHat(i, Box::new(f))
    }

    pub fn kw(i: PlayerId, f: Formula) -> Self {
        Kw(i, Box::new(f))
    }

    /// `Kw_i p` for a variable.
    pub fn kw_atom(i: PlayerId, v: VarId) -> Self {
        Kw(i, Box::new(Atom(v)))
    }

    /// Left-nested conjunction; `Top` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or(Top)
    }

    /// Left-nested disjunction; `Bottom` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Bottom)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Top | Bottom | Atom(_) => 1,
            Not(a) | K(_, a) | KHat(_, a) | Kw(_, a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Modal nesting depth.
    pub fn modal_depth(&self) -> usize {
        match self {
            Top | Bottom | Atom(_) => 0,
            Not(a) => a.modal_depth(),
            K(_, a) | KHat(_, a) | Kw(_, a) => 1 + a.modal_depth(),
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
        }
    }

    pub fn is_modal_free(&self) -> bool {
        self.modal_depth() == 0
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Top | Bottom | Atom(_) => vec![],
            Not(a) | K(_, a) | KHat(_, a) | Kw(_, a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => vec![a, b],
        }
    }

    /// Calls `f` on every node, parents before children.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Bitmask of variables occurring in the formula.
    pub fn atoms_mask(&self) -> u64 {
        let mut m = 0;
        self.visit(&mut |n| {
            if let Atom(v) = n {
                m |= v.bit();
            }
        });
        m
    }

    /// Players named by some modality.
    pub fn agents(&self) -> Vec<PlayerId> {
        let mut out = Vec::new();
        self.visit(&mut |n| {
            if let K(i, _) | KHat(i, _) | Kw(i, _) = n {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
        });
        out.sort();
        out
    }

    /// Every player and variable lies within the signature.
    pub fn well_formed(&self, sig: &Signature) -> bool {
        let mut ok = true;
        self.visit(&mut |n| match n {
            Atom(v) => ok &= (v.0 as usize) < sig.num_vars(),
            K(i, _) | KHat(i, _) | Kw(i, _) => ok &= sig.has_player(*i),
            _ => {}
        });
        ok
    }

    /// Replaces atoms by formulas.
    pub fn substitute(&self, f: &dyn Fn(VarId) -> Formula) -> Formula {
        match self {
            Top => Top,
            Bottom => Bottom,
            Atom(v) => f(*v),
            Not(a) => Formula::not(a.substitute(f)),
            And(a, b) => Formula::and(a.substitute(f), b.substitute(f)),
            Or(a, b) => Formula::or(a.substitute(f), b.substitute(f)),
            Implies(a, b) => Formula::implies(a.substitute(f), b.substitute(f)),
            Iff(a, b) => Formula::iff(a.substitute(f), b.substitute(f)),
            K(i, a) => Formula::k(*i, a.substitute(f)),
            KHat(i, a) => Formula::khat(*i, a.substitute(f)),
            Kw(i, a) => Formula::kw(*i, a.substitute(f)),
        }
    }

    /// Rewrites into the core grammar {Atom, Not, Or, K}, keeping `Top` and
    /// `Bottom` as constants.
    pub fn desugar(&self) -> Formula {
        match self {
            Top => Top,
            Bottom => Bottom,
            Atom(v) => Atom(*v),
            Not(a) => Formula::not(a.desugar()),
            Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            And(a, b) => Formula::not(Formula::or(
                Formula::not(a.desugar()),
                Formula::not(b.desugar()),
            )),
            Implies(a, b) => Formula::or(Formula::not(a.desugar()), b.desugar()),
            Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                let fwd = Formula::or(Formula::not(a.clone()), b.clone());
                let bwd = Formula::or(Formula::not(b), a);
                Formula::not(Formula::or(Formula::not(fwd), Formula::not(bwd)))
            }
            K(i, a) => Formula::k(*i, a.desugar()),
            KHat(i, a) => Formula::not(Formula::k(*i, Formula::not(a.desugar()))),
            Kw(i, a) => {
                let a = a.desugar();
                Formula::or(Formula::k(*i, a.clone()), Formula::k(*i, Formula::not(a)))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> Display<'a> {
        Display { f: self, sig }
    }

    pub fn to_text(&self, sig: &Signature) -> String {
        self.display(sig).to_string()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Iff = 0,
    Implies = 1,
    Or = 2,
    And = 3,
    Unary = 4,
}

fn prec(f: &Formula) -> Prec {
    match f {
        Iff(..) => Prec::Iff,
        Implies(..) => Prec::Implies,
        Or(..) => Prec::Or,
        And(..) => Prec::And,
        _ => Prec::Unary,
    }
}

/// Pretty-printer in the textual goal grammar; output re-parses to the
/// same tree.
pub struct Display<'a> {
    f: &'a Formula,
    sig: &'a Signature,
}

impl Display<'_> {
    fn write(&self, f: &Formula, min: Prec, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = prec(f) < min;
        if paren {
            out.write_str("(")?;
        }
        match f {
            Top => out.write_str("T")?,
            Bottom => out.write_str("F")?,
            Atom(v) => out.write_str(self.sig.name(*v))?,
            Not(a) => {
                out.write_str("!")?;
                self.write(a, Prec::Unary, out)?;
            }
            K(i, a) | KHat(i, a) | Kw(i, a) => {
                let op = match f {
                    K(..) => "K",
                    KHat(..) => "Kh",
                    _ => "Kw",
                };
                write!(out, "{op}{} ", i.0)?;
                self.write(a, Prec::Unary, out)?;
            }
            And(a, b) => self.binary(a, b, " & ", Prec::And, false, out)?,
            Or(a, b) => self.binary(a, b, " | ", Prec::Or, false, out)?,
            Implies(a, b) => self.binary(a, b, " -> ", Prec::Implies, true, out)?,
            Iff(a, b) => self.binary(a, b, " <-> ", Prec::Iff, true, out)?,
        }
        if paren {
            out.write_str(")")?;
        }
        Ok(())
    }

    fn binary(
        &self,
        a: &Formula,
        b: &Formula,
        op: &str,
        p: Prec,
        right_assoc: bool,
        out: &mut fmt::Formatter<'_>,
    ) -> fmt::Result {
        let tighter = match p {
            Prec::Iff => Prec::Implies,
            Prec::Implies => Prec::Or,
            Prec::Or => Prec::And,
            _ => Prec::Unary,
        };
        let (lp, rp) = if right_assoc {
            (tighter, p)
        } else {
            (p, tighter)
        };
        self.write(a, lp, out)?;
        out.write_str(op)?;
        self.write(b, rp, out)
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.f, Prec::Iff, out)
    }
}
