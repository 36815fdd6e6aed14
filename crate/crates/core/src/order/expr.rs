use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;

use super::ordered::{check_perm, OrderedGSet};
use crate::error::{Error, Result};
use crate::orbit::OrbitSymbol;

/// Constructor expressions for ordered sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderExpr {
    Zero,
    Unit,
    /// `R` in factor `t` (0-based).
    Gen(usize),
    Rev(Box<OrderExpr>),
    Sum(Box<OrderExpr>, Box<OrderExpr>),
    Prod(Box<OrderExpr>, Box<OrderExpr>),
    /// `n`-fold tuple power, comparing coordinates in the order given by the permutation (0-based).
    Tuples(Box<OrderExpr>, usize, Vec<usize>),
}

/// Length of the longest chain: `None` when infinite.
pub type ChainLength = Option<u128>;

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl OrderExpr {
    pub fn rev(e: OrderExpr) -> Self {
        OrderExpr::Rev(Box::new(e))
    }

    pub fn sum(a: OrderExpr, b: OrderExpr) -> Self {
        OrderExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: OrderExpr, b: OrderExpr) -> Self {
        OrderExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn tup(e: OrderExpr, n: usize) -> Self {
        OrderExpr::Tuples(Box::new(e), n, (0..n).collect())
    }

    pub fn tup_perm(e: OrderExpr, perm: Vec<usize>) -> Self {
        let n = perm.len();
        OrderExpr::Tuples(Box::new(e), n, perm)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            OrderExpr::Zero | OrderExpr::Unit | OrderExpr::Gen(_) => 1,
            OrderExpr::Rev(e) | OrderExpr::Tuples(e, _, _) => 1 + e.size(),
            OrderExpr::Sum(a, b) | OrderExpr::Prod(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn max_factor(&self) -> Option<usize> {
        match self {
            OrderExpr::Zero | OrderExpr::Unit => None,
            OrderExpr::Gen(t) => Some(*t),
            OrderExpr::Rev(e) | OrderExpr::Tuples(e, _, _) => e.max_factor(),
            OrderExpr::Sum(a, b) | OrderExpr::Prod(a, b) => a.max_factor().max(b.max_factor()),
        }
    }

    /// Upper bound on the total arity of an orbit of the carrier.
    pub fn max_arity(&self) -> usize {
        match self {
            OrderExpr::Zero | OrderExpr::Unit => 0,
            OrderExpr::Gen(_) => 1,
            OrderExpr::Rev(e) => e.max_arity(),
            OrderExpr::Sum(a, b) => a.max_arity().max(b.max_arity()),
            OrderExpr::Prod(a, b) => a.max_arity() + b.max_arity(),
            OrderExpr::Tuples(e, n, _) => n * e.max_arity(),
        }
    }

    pub fn contains_tuples(&self) -> bool {
        match self {
            OrderExpr::Zero | OrderExpr::Unit | OrderExpr::Gen(_) => false,
            OrderExpr::Tuples(..) => true,
            OrderExpr::Rev(e) => e.contains_tuples(),
            OrderExpr::Sum(a, b) | OrderExpr::Prod(a, b) => a.contains_tuples() || b.contains_tuples(),
        }
    }

    pub fn evaluate(&self, shape: usize) -> Result<OrderedGSet> {
        if shape == 0 {
            return Err(Error::ShapeMismatch("shape must be at least 1".into()));
        }
        match self {
            OrderExpr::Zero => Ok(OrderedGSet::zero(shape)),
            OrderExpr::Unit => Ok(OrderedGSet::unit(shape)),
            OrderExpr::Gen(t) => {
                if *t >= shape {
                    return Err(Error::ShapeMismatch(format!("factor {} in shape {shape}", t + 1)));
                }
                Ok(OrderedGSet::generator(shape, *t))
            }
            OrderExpr::Rev(e) => Ok(e.evaluate(shape)?.reverse()),
            OrderExpr::Sum(a, b) => OrderedGSet::lex_sum(&a.evaluate(shape)?, &b.evaluate(shape)?),
            OrderExpr::Prod(a, b) => OrderedGSet::lex_product(&a.evaluate(shape)?, &b.evaluate(shape)?),
            OrderExpr::Tuples(e, n, perm) => {
                check_perm(*n, perm)?;
                e.evaluate(shape)?.tuple_power(*n, perm)
            }
        }
    }

    /// Largest `n` with a nonempty `n`-th tuple power.
    pub fn chain_length(&self) -> ChainLength {
        match self {
            OrderExpr::Zero => Some(0),
            OrderExpr::Unit => Some(1),
            OrderExpr::Gen(_) => None,
            OrderExpr::Rev(e) => e.chain_length(),
            OrderExpr::Sum(a, b) => match (a.chain_length(), b.chain_length()) {
                (Some(x), Some(y)) => Some(x.saturating_add(y)),
                _ => None,
            },
            OrderExpr::Prod(a, b) => match (a.chain_length(), b.chain_length()) {
                (Some(0), _) | (_, Some(0)) => Some(0),
                (Some(x), Some(y)) => Some(x.saturating_mul(y)),
                _ => None,
            },
            OrderExpr::Tuples(e, n, _) => match (e.chain_length(), *n) {
                (_, 0) => Some(1),
                (None, _) => None,
                (Some(l), n) => Some(binomial(l, n as u128)),
            },
        }
    }

    /// Infinite-like iff some `R` survives (is not killed by a zero factor or a
    /// too-high tuple power).
    pub fn is_infinite_like(&self) -> bool {
        self.chain_length().is_none()
    }

    /// Replaces every generator `R@t` by `sub[t]`.
    pub fn substitute(&self, sub: &[OrderExpr]) -> OrderExpr {
        match self {
            OrderExpr::Zero => OrderExpr::Zero,
            OrderExpr::Unit => OrderExpr::Unit,
            OrderExpr::Gen(t) => sub[*t].clone(),
            OrderExpr::Rev(e) => OrderExpr::rev(e.substitute(sub)),
            OrderExpr::Sum(a, b) => OrderExpr::sum(a.substitute(sub), b.substitute(sub)),
            OrderExpr::Prod(a, b) => OrderExpr::prod(a.substitute(sub), b.substitute(sub)),
            OrderExpr::Tuples(e, n, p) => OrderExpr::Tuples(Box::new(e.substitute(sub)), *n, p.clone()),
        }
    }
}

impl fmt::Display for OrderExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderExpr::Zero => write!(f, "0"),
            OrderExpr::Unit => write!(f, "1"),
            OrderExpr::Gen(0) => write!(f, "R"),
            OrderExpr::Gen(t) => write!(f, "R@{}", t + 1),
            OrderExpr::Rev(e) => write!(f, "rev({e})"),
            OrderExpr::Sum(a, b) => write!(f, "sum({a},{b})"),
            OrderExpr::Prod(a, b) => write!(f, "prod({a},{b})"),
            OrderExpr::Tuples(e, n, p) => {
                if p.iter().copied().eq(0..*n) {
                    write!(f, "tup({e},{n})")
                } else {
                    write!(f, "tup({e},{n},{})", p.iter().map(|i| i + 1).join(","))
                }
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse { position: start, message: "number out of range".into() })
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn expr(&mut self) -> Result<OrderExpr> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                return Ok(OrderExpr::Zero);
            }
            Some(b'1') => {
                self.pos += 1;
                return Ok(OrderExpr::Unit);
            }
            None => return Err(self.error("unexpected end of input")),
            _ => {}
        }
        let name = self.ident();
        match name.as_str() {
            "R" => {
                if self.peek() == Some(b'@') {
                    self.pos += 1;
                    let t = self.number()?;
                    if t == 0 {
                        return Err(Error::Parse { position: self.pos - 1, message: "factors are numbered from 1".into() });
                    }
                    Ok(OrderExpr::Gen(t - 1))
                } else {
                    Ok(OrderExpr::Gen(0))
                }
            }
            "rev" => {
                self.expect(b'(')?;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(OrderExpr::rev(e))
            }
            "sum" | "prod" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                Ok(if name == "sum" { OrderExpr::sum(a, b) } else { OrderExpr::prod(a, b) })
            }
            "tup" => {
                self.expect(b'(')?;
                let e = self.expr()?;
                self.expect(b',')?;
                let n_pos = self.pos;
                let n = self.number()?;
                let mut perm = Vec::new();
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    let p = self.number()?;
                    if p == 0 {
                        return Err(self.error("permutation entries are numbered from 1"));
                    }
                    perm.push(p - 1);
                }
                self.expect(b')')?;
                if perm.is_empty() {
                    perm = (0..n).collect();
                }
                check_perm(n, &perm).map_err(|_| Error::Parse {
                    position: n_pos,
                    message: format!("not a permutation of {n} points"),
                })?;
                Ok(OrderExpr::Tuples(Box::new(e), n, perm))
            }
            "" => Err(self.error("expected an expression")),
            other => Err(Error::Parse { position: start, message: format!("unknown constructor {other:?}") }),
        }
    }
}

/// Largest carrier arity admitted by [`enumerate_expressions`]. Checking an
/// order touches `X^3`, whose orbit count grows like a Delannoy number in the
/// arity, so the exhaustive class is cut by arity rather than by shape.
pub const SUITE_MAX_ARITY: usize = 3;

/// Expressions with at most `max_size` nodes over the leaves `0`, `1` and
/// `R@t`, whose carrier arity is at most [`SUITE_MAX_ARITY`]. Tuple powers
/// have `n <= 3` and every permutation is included.
pub fn enumerate_expressions(max_size: usize, shape: usize) -> Vec<OrderExpr> {
    let mut by_size: Vec<Vec<OrderExpr>> = vec![Vec::new(); max_size + 1];
    let keep = |e: &OrderExpr| e.max_arity() <= SUITE_MAX_ARITY;
    for s in 1..=max_size {
        let mut here = Vec::new();
        if s == 1 {
            here.push(OrderExpr::Zero);
            here.push(OrderExpr::Unit);
            here.extend((0..shape).map(OrderExpr::Gen));
        } else {
            for e in &by_size[s - 1] {
                here.push(OrderExpr::rev(e.clone()));
                for n in 0..=3 {
                    if n * e.max_arity() > SUITE_MAX_ARITY {
                        continue;
                    }
                    for perm in (0..n).permutations(n) {
                        here.push(OrderExpr::Tuples(Box::new(e.clone()), n, perm));
                    }
                }
            }
            for a_size in 1..s - 1 {
                let b_size = s - 1 - a_size;
                for a in &by_size[a_size] {
                    for b in &by_size[b_size] {
                        here.push(OrderExpr::sum(a.clone(), b.clone()));
                        let p = OrderExpr::prod(a.clone(), b.clone());
                        if keep(&p) {
                            here.push(p);
                        }
                    }
                }
            }
        }
        by_size[s] = here;
    }
    by_size.into_iter().flatten().collect()
}

/// Largest total orbit arity in a carrier.
fn carrier_arity(o: &OrderedGSet) -> usize {
    o.carrier().orbits().iter().map(OrbitSymbol::total).max().unwrap_or(0)
}

/// One representative expression per distinct value of `evaluate` over the
/// class of [`enumerate_expressions`], smallest expressions first.
///
/// Evaluation is compositional, so combining distinct children of minimal
/// size reaches every value the full enumeration reaches, while visiting far
/// fewer expressions. The arity cut is applied to carriers instead of the
/// structural bound, which admits a few more expressions.
pub fn distinct_evaluations(max_size: usize, shape: usize) -> Result<Vec<(OrderExpr, OrderedGSet)>> {
    let mut found: Vec<(OrderExpr, OrderedGSet)> = Vec::new();
    let mut seen: HashSet<OrderedGSet> = HashSet::new();
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); max_size + 1];
    for s in 1..=max_size {
        let mut fresh: Vec<(OrderExpr, OrderedGSet)> = Vec::new();
        let mut push = |e: OrderExpr, o: OrderedGSet, fresh: &mut Vec<(OrderExpr, OrderedGSet)>| {
            if carrier_arity(&o) <= SUITE_MAX_ARITY && seen.insert(o.clone()) {
                fresh.push((e, o));
            }
        };
        if s == 1 {
            for e in [OrderExpr::Zero, OrderExpr::Unit].into_iter().chain((0..shape).map(OrderExpr::Gen)) {
                let o = e.evaluate(shape)?;
                push(e, o, &mut fresh);
            }
        } else {
            for &i in &by_size[s - 1] {
                let (e, o) = &found[i];
                push(OrderExpr::rev(e.clone()), o.reverse(), &mut fresh);
                for n in 0..=3 {
                    if n * carrier_arity(o) > SUITE_MAX_ARITY {
                        continue;
                    }
                    for perm in (0..n).permutations(n) {
                        let t = o.tuple_power(n, &perm)?;
                        push(OrderExpr::Tuples(Box::new(e.clone()), n, perm), t, &mut fresh);
                    }
                }
            }
            for a_size in 1..s - 1 {
                for &i in &by_size[a_size] {
                    for &j in &by_size[s - 1 - a_size] {
                        let ((ea, oa), (eb, ob)) = (&found[i], &found[j]);
                        push(OrderExpr::sum(ea.clone(), eb.clone()), OrderedGSet::lex_sum(oa, ob)?, &mut fresh);
                        if carrier_arity(oa) + carrier_arity(ob) <= SUITE_MAX_ARITY {
                            push(OrderExpr::prod(ea.clone(), eb.clone()), OrderedGSet::lex_product(oa, ob)?, &mut fresh);
                        }
                    }
                }
            }
        }
        for item in fresh {
            by_size[s].push(found.len());
            found.push(item);
        }
    }
    Ok(found)
}
