//! Module expressions.
//!
//! ```text
//! expr  := name | "natural" | "trivial(" int ")" | "dual(" expr ")"
//!        | "tensor(" expr "," expr ")" | "sym(" int "," expr ")"
//!        | "wedge2(" expr ")" | "twist(" expr "," int ")"
//!        | "induce(" name "," expr ")" | "sub(" expr "," basis ")"
//!        | "quot(" expr "," basis ")" | "ad(" expr ")" | "adq(" expr ")"
//!        | "dsum(" expr "," expr ")" | "ext(" expr "," expr "," int ")"
//! basis := "[" vector ("," vector)* "]"
//! vector:= "[" entry ("," entry)* "]"
//! entry := int | "[" int ("," int)* "]"      (coefficient list)
//! ```
//!
//! Inside `induce(H, e)` the expression `e` is evaluated over the subgroup
//! `H`, with its own `natural` and named modules.

use alloc::{boxed::Box, format, string::String, sync::Arc, vec::Vec};

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::group::{GroupData, SubgroupRef, DEFAULT_MEMORY_CAP};
use crate::rep::Rep;
use crate::structure::extension_by_basis;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    List(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Natural,
    Trivial(usize),
    Dual(Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    Sym(usize, Box<Expr>),
    Wedge2(Box<Expr>),
    Twist(Box<Expr>, u32),
    Induce(String, Box<Expr>),
    Sub(Box<Expr>, Value),
    Quot(Box<Expr>, Value),
    Ad(Box<Expr>),
    Adq(Box<Expr>),
    Dsum(Box<Expr>, Box<Expr>),
    Ext(Box<Expr>, Box<Expr>, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return self.err("expected a name");
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        s.parse().or_else(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }

    fn uint(&mut self) -> Result<usize> {
        let start = self.pos;
        let n = self.int()?;
        usize::try_from(n).or_else(|_| {
            self.pos = start;
            self.err("expected a non-negative integer")
        })
    }

    fn value(&mut self) -> Result<Value> {
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let mut items = Vec::new();
            if self.peek() == Some(b']') {
                self.pos += 1;
                return Ok(Value::List(items));
            }
            loop {
                items.push(self.value()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b']') => {
                        self.pos += 1;
                        return Ok(Value::List(items));
                    }
                    _ => return self.err("expected `,` or `]`"),
                }
            }
        }
        Ok(Value::Int(self.int()?))
    }

    fn boxed(&mut self) -> Result<Box<Expr>> {
        Ok(Box::new(self.expr()?))
    }

    fn expr(&mut self) -> Result<Expr> {
        let name = self.ident()?;
        let is_call = self.peek() == Some(b'(');
        if !is_call {
            return Ok(match name.as_str() {
                "natural" => Expr::Natural,
                _ => Expr::Name(name),
            });
        }
        self.pos += 1;
        let e = match name.as_str() {
            "trivial" => Expr::Trivial(self.uint()?),
            "dual" => Expr::Dual(self.boxed()?),
            "wedge2" => Expr::Wedge2(self.boxed()?),
            "ad" => Expr::Ad(self.boxed()?),
            "adq" => Expr::Adq(self.boxed()?),
            "tensor" | "dsum" => {
                let a = self.boxed()?;
                self.expect(b',')?;
                let b = self.boxed()?;
                if name == "tensor" {
                    Expr::Tensor(a, b)
                } else {
                    Expr::Dsum(a, b)
                }
            }
            "sym" => {
                let b = self.uint()?;
                self.expect(b',')?;
                Expr::Sym(b, self.boxed()?)
            }
            "twist" => {
                let a = self.boxed()?;
                self.expect(b',')?;
                let i = self.uint()?;
                Expr::Twist(a, u32::try_from(i).map_err(|_| Error::Parse { pos: self.pos, msg: "twist too large".into() })?)
            }
            "induce" => {
                let h = self.ident()?;
                self.expect(b',')?;
                Expr::Induce(h, self.boxed()?)
            }
            "sub" | "quot" => {
                let a = self.boxed()?;
                self.expect(b',')?;
                let basis = self.value()?;
                if name == "sub" {
                    Expr::Sub(a, basis)
                } else {
                    Expr::Quot(a, basis)
                }
            }
            "ext" => {
                let a = self.boxed()?;
                self.expect(b',')?;
                let b = self.boxed()?;
                self.expect(b',')?;
                Expr::Ext(a, b, self.uint()?)
            }
            "natural" => return self.err("`natural` takes no arguments"),
            other => return self.err(format!("unknown constructor `{other}`")),
        };
        self.expect(b')')?;
        Ok(e)
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Named modules of a group, and named subgroups with their own
/// environments.
#[derive(Clone, Debug)]
pub struct Env {
    pub group: Arc<GroupData>,
    pub reps: Vec<(String, Rep)>,
    pub subgroups: Vec<(String, SubgroupEnv)>,
}

#[derive(Clone, Debug)]
pub struct SubgroupEnv {
    pub sub: SubgroupRef,
    pub env: Env,
}

impl Env {
    pub fn new(group: &Arc<GroupData>) -> Env {
        Env { group: group.clone(), reps: Vec::new(), subgroups: Vec::new() }
    }

    pub fn bind(&mut self, name: impl Into<String>, rep: Rep) {
        let name = name.into();
        let rep = rep.with_label(name.clone());
        match self.reps.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = rep,
            None => self.reps.push((name, rep)),
        }
    }

    pub fn bind_subgroup(&mut self, name: impl Into<String>, sub: SubgroupRef, env: Env) {
        self.subgroups.push((name.into(), SubgroupEnv { sub, env }));
    }

    pub fn get(&self, name: &str) -> Option<&Rep> {
        self.reps.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }
}

/// Settings for expressions that need them (`ext`).
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub seed: u64,
    pub mem_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { seed: 0, mem_cap: DEFAULT_MEMORY_CAP }
    }
}

pub fn basis_vectors(v: &Value, rep: &Rep) -> Result<Vec<Vec<Fe>>> {
    let f = rep.field();
    let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.into() };
    let Value::List(rows) = v else {
        return Err(bad("basis must be a list of vectors"));
    };
    rows.iter()
        .map(|row| {
            let Value::List(entries) = row else {
                return Err(bad("basis vector must be a list"));
            };
            if entries.len() != rep.dim() {
                return Err(Error::Dimension(format!(
                    "basis vector of length {} for a module of dimension {}",
                    entries.len(),
                    rep.dim()
                )));
            }
            entries
                .iter()
                .map(|e| match e {
                    Value::Int(n) => f.from_index(*n),
                    Value::List(cs) => {
                        let cs: Vec<i64> = cs
                            .iter()
                            .map(|c| match c {
                                Value::Int(n) => Ok(*n),
                                _ => Err(bad("coefficient lists hold integers")),
                            })
                            .collect::<Result<_>>()?;
                        f.from_coeffs(&cs)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn eval(expr: &Expr, env: &Env, opts: &EvalOptions) -> Result<Rep> {
    let label = |r: Rep, e: &Expr| r.with_label(display(e));
    Ok(match expr {
        Expr::Name(n) => env.get(n).cloned().ok_or_else(|| Error::Unbound(n.clone()))?,
        Expr::Natural => Rep::natural(&env.group),
        Expr::Trivial(n) => Rep::trivial(&env.group, *n),
        Expr::Dual(a) => label(eval(a, env, opts)?.dual()?, expr),
        Expr::Tensor(a, b) => label(eval(a, env, opts)?.tensor(&eval(b, env, opts)?)?, expr),
        Expr::Sym(b, a) => label(eval(a, env, opts)?.sym(*b)?, expr),
        Expr::Wedge2(a) => label(eval(a, env, opts)?.wedge2()?, expr),
        Expr::Twist(a, i) => label(eval(a, env, opts)?.twist(*i)?, expr),
        Expr::Induce(h, a) => {
            let se = env
                .subgroups
                .iter()
                .find(|(n, _)| n == h)
                .map(|(_, s)| s)
                .ok_or_else(|| Error::Unbound(h.clone()))?;
            let w = eval(a, &se.env, opts)?;
            label(Rep::induce(&env.group, &se.sub, &se.env.group, &w)?, expr)
        }
        Expr::Sub(a, basis) => {
            let r = eval(a, env, opts)?;
            let b = basis_vectors(basis, &r)?;
            label(r.sub(&b)?, expr)
        }
        Expr::Quot(a, basis) => {
            let r = eval(a, env, opts)?;
            let b = basis_vectors(basis, &r)?;
            label(r.quot(&b)?, expr)
        }
        Expr::Ad(a) => label(eval(a, env, opts)?.ad()?, expr),
        Expr::Adq(a) => label(eval(a, env, opts)?.adq()?, expr),
        Expr::Dsum(a, b) => label(eval(a, env, opts)?.dsum(&eval(b, env, opts)?)?, expr),
        Expr::Ext(a, b, i) => {
            let (e, _) = extension_by_basis(&eval(a, env, opts)?, &eval(b, env, opts)?, *i, opts.mem_cap)?;
            label(e, expr)
        }
    })
}

/// Parse and evaluate.
pub fn build(src: &str, env: &Env, opts: &EvalOptions) -> Result<Rep> {
    eval(&parse(src)?, env, opts)
}

fn display_value(v: &Value) -> String {
    match v {
        Value::Int(n) => format!("{n}"),
        Value::List(items) => {
            let parts: Vec<String> = items.iter().map(display_value).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

/// Canonical text of an expression.
pub fn display(e: &Expr) -> String {
    match e {
        Expr::Name(n) => n.clone(),
        Expr::Natural => "natural".into(),
        Expr::Trivial(n) => format!("trivial({n})"),
        Expr::Dual(a) => format!("dual({})", display(a)),
        Expr::Tensor(a, b) => format!("tensor({},{})", display(a), display(b)),
        Expr::Sym(b, a) => format!("sym({b},{})", display(a)),
        Expr::Wedge2(a) => format!("wedge2({})", display(a)),
        Expr::Twist(a, i) => format!("twist({},{i})", display(a)),
        Expr::Induce(h, a) => format!("induce({h},{})", display(a)),
        Expr::Sub(a, b) => format!("sub({},{})", display(a), display_value(b)),
        Expr::Quot(a, b) => format!("quot({},{})", display(a), display_value(b)),
        Expr::Ad(a) => format!("ad({})", display(a)),
        Expr::Adq(a) => format!("adq({})", display(a)),
        Expr::Dsum(a, b) => format!("dsum({},{})", display(a), display(b)),
        Expr::Ext(a, b, i) => format!("ext({},{},{i})", display(a), display(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::group::DEFAULT_CAP;
    use crate::mat::Mat;
    use alloc::vec;

    fn env5() -> Env {
        let f = Field::new(5, 1).unwrap();
        let u = Mat::from_vec(&f, 2, 2, vec![1, 1, 0, 1]).unwrap();
        let w = Mat::from_vec(&f, 2, 2, vec![0, 1, 4, 0]).unwrap();
        let g = Arc::new(GroupData::enumerate(&[u, w], DEFAULT_CAP).unwrap());
        let mut env = Env::new(&g);
        env.bind("L1", Rep::natural(&g));
        env
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "natural",
            "sym(4,natural)",
            "adq(tensor(L1,dual(L1)))",
            "sub(dsum(natural,natural),[[1,0,1,0],[0,1,0,1]])",
            "ext(natural,natural,0)",
            "induce(H,twist(natural,1))",
            "quot(trivial(2),[[1,-1]])",
        ] {
            assert_eq!(display(&parse(s).unwrap()), s);
        }
        assert_eq!(parse(" sym( 2 , natural ) ").unwrap(), parse("sym(2,natural)").unwrap());
    }

    #[test]
    fn parse_errors() {
        for s in ["", "sym(natural)", "tensor(natural)", "foo(natural)", "natural)", "sub(natural,[[1,0]", "3"] {
            assert!(matches!(parse(s), Err(Error::Parse { .. })), "{s}");
        }
    }

    #[test]
    fn evaluate() {
        let env = env5();
        let o = EvalOptions::default();
        assert_eq!(build("sym(4,natural)", &env, &o).unwrap().dim(), 5);
        assert_eq!(build("adq(L1)", &env, &o).unwrap().dim(), 3);
        assert_eq!(build("ext(L1,L1,0)", &env, &o).unwrap().dim(), 4);
        assert_eq!(build("sub(dsum(natural,natural),[[1,0,1,0],[0,1,0,1]])", &env, &o).unwrap().dim(), 2);
        assert_eq!(build("nope", &env, &o).unwrap_err(), Error::Unbound("nope".into()));
        assert_eq!(build("sub(natural,[[1,0]])", &env, &o).unwrap_err(), Error::NotInvariant);
        assert!(build("ext(L1,L1,1)", &env, &o).is_err());
    }
}
