use std::collections::{HashMap, HashSet};
use std::fmt;

use super::TTError;

/// Source position (1-based). Positions never affect equality of syntax.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExpr {
    Unit,
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Eq(Box<TermExpr>, Box<TermExpr>),
    Sigma(String, Box<TypeExpr>, Box<TypeExpr>),
    Pi(String, Box<TypeExpr>, Box<TypeExpr>),
    Named(String, Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermExpr {
    Var(String, Pos),
    Tt,
    Pair(Box<TermExpr>, Box<TermExpr>),
    Fst(Box<TermExpr>),
    Snd(Box<TermExpr>),
    Refl(Box<TermExpr>),
    Lam(Box<TermExpr>),
    App(Box<TermExpr>, Box<TermExpr>),
}

pub type Telescope = Vec<(String, TypeExpr)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtxRef {
    Named(String, Pos),
    Inline(Telescope),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Ctx { name: String, vars: Telescope, pos: Pos },
    Type { name: String, ctx: CtxRef, ty: TypeExpr, pos: Pos },
    Term { name: String, ty: TypeExpr, ctx: CtxRef, body: TermExpr, pos: Pos },
    Check { lhs: TermExpr, rhs: TermExpr, ty: TypeExpr, ctx: CtxRef, pos: Pos },
}

impl Decl {
    pub fn pos(&self) -> Pos {
        match self {
            Decl::Ctx { pos, .. } | Decl::Type { pos, .. } | Decl::Term { pos, .. } | Decl::Check { pos, .. } => *pos,
        }
    }

    /// A short label for reports.
    pub fn label(&self) -> String {
        match self {
            Decl::Ctx { name, .. } => format!("ctx {name}"),
            Decl::Type { name, .. } => format!("type {name}"),
            Decl::Term { name, .. } => format!("term {name}"),
            Decl::Check { pos, .. } => format!("check (line {})", pos.line),
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Unit => write!(f, "Unit"),
            TypeExpr::Prod(a, b) => write!(f, "Prod({a}, {b})"),
            TypeExpr::Eq(t, u) => write!(f, "Eq({t}, {u})"),
            TypeExpr::Sigma(x, a, b) => write!(f, "Sigma ({x} : {a}) ({b})"),
            TypeExpr::Pi(x, a, b) => write!(f, "Pi ({x} : {a}) ({b})"),
            TypeExpr::Named(n, _) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for TermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermExpr::Var(n, _) => write!(f, "{n}"),
            TermExpr::Tt => write!(f, "tt"),
            TermExpr::Pair(a, b) => write!(f, "(pair {a} {b})"),
            TermExpr::Fst(a) => write!(f, "(fst {a})"),
            TermExpr::Snd(a) => write!(f, "(snd {a})"),
            TermExpr::Refl(a) => write!(f, "(refl {a})"),
            TermExpr::Lam(a) => write!(f, "(lam {a})"),
            TermExpr::App(a, b) => write!(f, "(app {a} {b})"),
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
}

struct Lexed {
    toks: Vec<(Tok, Pos)>,
    end: Pos,
}

fn lex(src: &str) -> Result<Lexed, TTError> {
    let mut toks = Vec::new();
    let mut end = Pos { line: 1, col: 1 };
    for (i, line) in src.lines().enumerate() {
        let code = line.split("--").next().unwrap_or("");
        let chars: Vec<char> = code.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let pos = Pos { line: i + 1, col: j + 1 };
            let c = chars[j];
            if c.is_whitespace() {
                j += 1;
            } else if c.is_alphanumeric() || c == '_' {
                let start = j;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                    j += 1;
                }
                toks.push((Tok::Ident(chars[start..j].iter().collect()), pos));
            } else {
                let two: String = chars[j..(j + 2).min(chars.len())].iter().collect();
                let sym = match (two.as_str(), c) {
                    (":=", _) => ":=",
                    ("==", _) => "==",
                    (_, ':') => ":",
                    (_, '(') => "(",
                    (_, ')') => ")",
                    (_, ',') => ",",
                    _ => return Err(TTError::Syntax { line: pos.line, col: pos.col, expected: "a token".into() }),
                };
                j += sym.len();
                toks.push((Tok::Sym(sym), pos));
            }
        }
        end = Pos { line: i + 1, col: chars.len() + 1 };
    }
    Ok(Lexed { toks, end })
}

const KEYWORDS: [&str; 18] = [
    "ctx", "type", "term", "check", "in", "Unit", "Prod", "Eq", "Sigma", "Pi", "tt", "pair", "fst", "snd", "refl",
    "lam", "app", "_",
];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|t| t.1).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn err<T>(&self, expected: &str) -> Result<T, TTError> {
        let p = self.pos();
        Err(TTError::Syntax { line: p.line, col: p.col, expected: expected.into() })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == k)
    }

    fn sym(&mut self, s: &str) -> Result<(), TTError> {
        if self.is_sym(s) {
            self.at += 1;
            Ok(())
        } else {
            self.err(&format!("`{s}`"))
        }
    }

    fn kw(&mut self, k: &str) -> Result<(), TTError> {
        if self.is_kw(k) {
            self.at += 1;
            Ok(())
        } else {
            self.err(&format!("`{k}`"))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), TTError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(x)) if !KEYWORDS.contains(&x.as_str()) => {
                let x = x.clone();
                self.at += 1;
                Ok((x, pos))
            }
            _ => self.err("a name"),
        }
    }

    fn decl(&mut self) -> Result<Decl, TTError> {
        let pos = self.pos();
        if self.is_kw("ctx") {
            self.at += 1;
            let (name, _) = self.ident()?;
            self.sym(":=")?;
            let vars = self.telescope()?;
            Ok(Decl::Ctx { name, vars, pos })
        } else if self.is_kw("type") {
            self.at += 1;
            let (name, _) = self.ident()?;
            self.kw("in")?;
            let ctx = self.ctx_ref()?;
            self.sym(":=")?;
            let ty = self.ty()?;
            Ok(Decl::Type { name, ctx, ty, pos })
        } else if self.is_kw("term") {
            self.at += 1;
            let (name, _) = self.ident()?;
            self.sym(":")?;
            let ty = self.ty()?;
            self.kw("in")?;
            let ctx = self.ctx_ref()?;
            self.sym(":=")?;
            let body = self.term()?;
            Ok(Decl::Term { name, ty, ctx, body, pos })
        } else if self.is_kw("check") {
            self.at += 1;
            let lhs = self.term()?;
            self.sym("==")?;
            let rhs = self.term()?;
            self.sym(":")?;
            let ty = self.ty()?;
            self.kw("in")?;
            let ctx = self.ctx_ref()?;
            Ok(Decl::Check { lhs, rhs, ty, ctx, pos })
        } else {
            self.err("`ctx`, `type`, `term` or `check`")
        }
    }

    fn telescope(&mut self) -> Result<Telescope, TTError> {
        self.sym("(")?;
        let mut vars = Vec::new();
        if self.is_sym(")") {
            self.at += 1;
            return Ok(vars);
        }
        loop {
            let (x, _) = self.ident()?;
            self.sym(":")?;
            let t = self.ty()?;
            vars.push((x, t));
            if self.is_sym(",") {
                self.at += 1;
            } else {
                self.sym(")")?;
                return Ok(vars);
            }
        }
    }

    fn ctx_ref(&mut self) -> Result<CtxRef, TTError> {
        if self.is_sym("(") {
            Ok(CtxRef::Inline(self.telescope()?))
        } else {
            let (n, p) = self.ident()?;
            Ok(CtxRef::Named(n, p))
        }
    }

    /// Two type arguments, either `(T, T)` or juxtaposed atoms.
    fn ty_pair(&mut self) -> Result<(TypeExpr, TypeExpr), TTError> {
        if self.is_sym("(") {
            let save = self.at;
            self.at += 1;
            let a = self.ty()?;
            if self.is_sym(",") {
                self.at += 1;
                let b = self.ty()?;
                self.sym(")")?;
                return Ok((a, b));
            }
            self.at = save;
        }
        Ok((self.ty_atom()?, self.ty_atom()?))
    }

    fn tm_pair(&mut self) -> Result<(TermExpr, TermExpr), TTError> {
        if self.is_sym("(") {
            let save = self.at;
            self.at += 1;
            let a = self.term()?;
            if self.is_sym(",") {
                self.at += 1;
                let b = self.term()?;
                self.sym(")")?;
                return Ok((a, b));
            }
            self.at = save;
        }
        Ok((self.term_atom()?, self.term_atom()?))
    }

    fn binder(&mut self) -> Result<(String, TypeExpr), TTError> {
        self.sym("(")?;
        let (x, _) = self.ident()?;
        self.sym(":")?;
        let a = self.ty()?;
        self.sym(")")?;
        Ok((x, a))
    }

    fn ty(&mut self) -> Result<TypeExpr, TTError> {
        if self.is_kw("Prod") {
            self.at += 1;
            let (a, b) = self.ty_pair()?;
            Ok(TypeExpr::Prod(Box::new(a), Box::new(b)))
        } else if self.is_kw("Eq") {
            self.at += 1;
            let (t, u) = self.tm_pair()?;
            Ok(TypeExpr::Eq(Box::new(t), Box::new(u)))
        } else if self.is_kw("Sigma") || self.is_kw("Pi") {
            let sigma = self.is_kw("Sigma");
            self.at += 1;
            let (x, a) = self.binder()?;
            let b = self.ty()?;
            Ok(if sigma {
                TypeExpr::Sigma(x, Box::new(a), Box::new(b))
            } else {
                TypeExpr::Pi(x, Box::new(a), Box::new(b))
            })
        } else {
            self.ty_atom()
        }
    }

    fn ty_atom(&mut self) -> Result<TypeExpr, TTError> {
        if self.is_kw("Unit") {
            self.at += 1;
            Ok(TypeExpr::Unit)
        } else if self.is_sym("(") {
            self.at += 1;
            let t = self.ty()?;
            self.sym(")")?;
            Ok(t)
        } else if matches!(self.peek(), Some(Tok::Ident(x)) if !KEYWORDS.contains(&x.as_str())) {
            let (n, p) = self.ident()?;
            Ok(TypeExpr::Named(n, p))
        } else {
            self.err("a type")
        }
    }

    fn term(&mut self) -> Result<TermExpr, TTError> {
        let unary = |p: &mut Parser, f: fn(Box<TermExpr>) -> TermExpr| -> Result<TermExpr, TTError> {
            p.at += 1;
            Ok(f(Box::new(p.term_atom()?)))
        };
        if self.is_kw("pair") {
            self.at += 1;
            let (a, b) = (self.term_atom()?, self.term_atom()?);
            Ok(TermExpr::Pair(Box::new(a), Box::new(b)))
        } else if self.is_kw("app") {
            self.at += 1;
            let (a, b) = (self.term_atom()?, self.term_atom()?);
            Ok(TermExpr::App(Box::new(a), Box::new(b)))
        } else if self.is_kw("fst") {
            unary(self, TermExpr::Fst)
        } else if self.is_kw("snd") {
            unary(self, TermExpr::Snd)
        } else if self.is_kw("refl") {
            unary(self, TermExpr::Refl)
        } else if self.is_kw("lam") {
            unary(self, TermExpr::Lam)
        } else {
            self.term_atom()
        }
    }

    fn term_atom(&mut self) -> Result<TermExpr, TTError> {
        if self.is_kw("tt") {
            self.at += 1;
            Ok(TermExpr::Tt)
        } else if self.is_sym("(") {
            self.at += 1;
            let t = self.term()?;
            self.sym(")")?;
            Ok(t)
        } else if matches!(self.peek(), Some(Tok::Ident(x)) if !KEYWORDS.contains(&x.as_str())) {
            let (n, p) = self.ident()?;
            Ok(TermExpr::Var(n, p))
        } else {
            self.err("a term")
        }
    }
}

/// Parses a whole file and checks that every term variable is bound.
pub fn parse(src: &str) -> Result<Vec<Decl>, TTError> {
    let lexed = lex(src)?;
    let mut p = Parser { toks: lexed.toks, at: 0, end: lexed.end };
    let mut decls = Vec::new();
    while p.peek().is_some() {
        decls.push(p.decl()?);
    }
    resolve(&decls)?;
    Ok(decls)
}

// ---------------------------------------------------------------------------
// Scope resolution. Binder names of the declared type are in scope in a
// term body, since `lam` takes its binder from the expected type.

fn binders_of(t: &TypeExpr, out: &mut HashSet<String>) {
    match t {
        TypeExpr::Prod(a, b) => {
            binders_of(a, out);
            binders_of(b, out);
        }
        TypeExpr::Sigma(x, a, b) | TypeExpr::Pi(x, a, b) => {
            out.insert(x.clone());
            binders_of(a, out);
            binders_of(b, out);
        }
        _ => {}
    }
}

struct Scope<'a> {
    terms: &'a HashSet<String>,
}

fn check_term(t: &TermExpr, bound: &HashSet<String>, sc: &Scope) -> Result<(), TTError> {
    match t {
        TermExpr::Var(n, p) => {
            if bound.contains(n) || sc.terms.contains(n) {
                Ok(())
            } else {
                Err(TTError::Unbound { name: n.clone(), line: p.line, col: p.col })
            }
        }
        TermExpr::Tt => Ok(()),
        TermExpr::Pair(a, b) | TermExpr::App(a, b) => {
            check_term(a, bound, sc)?;
            check_term(b, bound, sc)
        }
        TermExpr::Fst(a) | TermExpr::Snd(a) | TermExpr::Refl(a) | TermExpr::Lam(a) => check_term(a, bound, sc),
    }
}

fn check_type(t: &TypeExpr, bound: &HashSet<String>, sc: &Scope) -> Result<(), TTError> {
    match t {
        TypeExpr::Unit | TypeExpr::Named(..) => Ok(()),
        TypeExpr::Prod(a, b) => {
            check_type(a, bound, sc)?;
            check_type(b, bound, sc)
        }
        TypeExpr::Eq(x, y) => {
            check_term(x, bound, sc)?;
            check_term(y, bound, sc)
        }
        TypeExpr::Sigma(x, a, b) | TypeExpr::Pi(x, a, b) => {
            check_type(a, bound, sc)?;
            let mut inner = bound.clone();
            inner.insert(x.clone());
            check_type(b, &inner, sc)
        }
    }
}

fn telescope_scope(vars: &Telescope, sc: &Scope) -> Result<HashSet<String>, TTError> {
    let mut bound = HashSet::new();
    for (x, t) in vars {
        check_type(t, &bound, sc)?;
        bound.insert(x.clone());
    }
    Ok(bound)
}

fn resolve(decls: &[Decl]) -> Result<(), TTError> {
    let mut ctxs: HashMap<String, HashSet<String>> = HashMap::new();
    let mut terms: HashSet<String> = HashSet::new();
    for d in decls {
        let ctx_scope = |c: &CtxRef, terms: &HashSet<String>| -> Result<HashSet<String>, TTError> {
            match c {
                CtxRef::Named(n, p) => ctxs
                    .get(n)
                    .cloned()
                    .ok_or_else(|| TTError::Unbound { name: n.clone(), line: p.line, col: p.col }),
                CtxRef::Inline(vars) => telescope_scope(vars, &Scope { terms }),
            }
        };
        match d {
            Decl::Ctx { name, vars, .. } => {
                let s = telescope_scope(vars, &Scope { terms: &terms })?;
                ctxs.insert(name.clone(), s);
            }
            Decl::Type { ctx, ty, .. } => {
                let bound = ctx_scope(ctx, &terms)?;
                check_type(ty, &bound, &Scope { terms: &terms })?;
            }
            Decl::Term { name, ty, ctx, body, .. } => {
                let mut bound = ctx_scope(ctx, &terms)?;
                let sc = Scope { terms: &terms };
                check_type(ty, &bound, &sc)?;
                binders_of(ty, &mut bound);
                check_term(body, &bound, &sc)?;
                terms.insert(name.clone());
            }
            Decl::Check { lhs, rhs, ty, ctx, .. } => {
                let mut bound = ctx_scope(ctx, &terms)?;
                let sc = Scope { terms: &terms };
                check_type(ty, &bound, &sc)?;
                binders_of(ty, &mut bound);
                check_term(lhs, &bound, &sc)?;
                check_term(rhs, &bound, &sc)?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

pub fn free_in_term(t: &TermExpr, out: &mut HashSet<String>) {
    match t {
        TermExpr::Var(n, _) => {
            out.insert(n.clone());
        }
        TermExpr::Tt => {}
        TermExpr::Pair(a, b) | TermExpr::App(a, b) => {
            free_in_term(a, out);
            free_in_term(b, out);
        }
        TermExpr::Fst(a) | TermExpr::Snd(a) | TermExpr::Refl(a) | TermExpr::Lam(a) => free_in_term(a, out),
    }
}

/// Free term variables of a type (type names are not included).
pub fn free_in_type(t: &TypeExpr, out: &mut HashSet<String>) {
    match t {
        TypeExpr::Unit | TypeExpr::Named(..) => {}
        TypeExpr::Prod(a, b) => {
            free_in_type(a, out);
            free_in_type(b, out);
        }
        TypeExpr::Eq(x, y) => {
            free_in_term(x, out);
            free_in_term(y, out);
        }
        TypeExpr::Sigma(x, a, b) | TypeExpr::Pi(x, a, b) => {
            free_in_type(a, out);
            let mut inner = HashSet::new();
            free_in_type(b, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
    }
}

fn subst_term(t: &TermExpr, x: &str, by: &TermExpr) -> TermExpr {
    let s = |e: &TermExpr| Box::new(subst_term(e, x, by));
    match t {
        TermExpr::Var(n, _) if n == x => by.clone(),
        TermExpr::Var(..) | TermExpr::Tt => t.clone(),
        TermExpr::Pair(a, b) => TermExpr::Pair(s(a), s(b)),
        TermExpr::App(a, b) => TermExpr::App(s(a), s(b)),
        TermExpr::Fst(a) => TermExpr::Fst(s(a)),
        TermExpr::Snd(a) => TermExpr::Snd(s(a)),
        TermExpr::Refl(a) => TermExpr::Refl(s(a)),
        // `lam` binds the binder of its expected type, which is never `x`
        // after the capture-avoiding renaming below.
        TermExpr::Lam(a) => TermExpr::Lam(s(a)),
    }
}

fn rename_bound(t: &TypeExpr, avoid: &HashSet<String>) -> TypeExpr {
    match t {
        TypeExpr::Sigma(y, a, b) | TypeExpr::Pi(y, a, b) => {
            let (y2, b2) = if avoid.contains(y) {
                let mut fresh = format!("{y}'");
                while avoid.contains(&fresh) {
                    fresh.push('\'');
                }
                let v = TermExpr::Var(fresh.clone(), Pos::default());
                (fresh, subst_type(b, y, &v))
            } else {
                (y.clone(), (**b).clone())
            };
            let a2 = Box::new(rename_bound(a, avoid));
            let b2 = Box::new(rename_bound(&b2, avoid));
            if matches!(t, TypeExpr::Sigma(..)) {
                TypeExpr::Sigma(y2, a2, b2)
            } else {
                TypeExpr::Pi(y2, a2, b2)
            }
        }
        TypeExpr::Prod(a, b) => TypeExpr::Prod(Box::new(rename_bound(a, avoid)), Box::new(rename_bound(b, avoid))),
        _ => t.clone(),
    }
}

/// `T[by/x]`, renaming binders that would capture free variables of `by`.
pub fn subst_type(t: &TypeExpr, x: &str, by: &TermExpr) -> TypeExpr {
    let mut avoid = HashSet::new();
    free_in_term(by, &mut avoid);
    let t = rename_bound(t, &avoid);
    match &t {
        TypeExpr::Unit | TypeExpr::Named(..) => t.clone(),
        TypeExpr::Prod(a, b) => TypeExpr::Prod(Box::new(subst_type(a, x, by)), Box::new(subst_type(b, x, by))),
        TypeExpr::Eq(p, q) => TypeExpr::Eq(Box::new(subst_term(p, x, by)), Box::new(subst_term(q, x, by))),
        TypeExpr::Sigma(y, a, b) | TypeExpr::Pi(y, a, b) => {
            let a2 = Box::new(subst_type(a, x, by));
            let b2 = if y == x { b.clone() } else { Box::new(subst_type(b, x, by)) };
            if matches!(t, TypeExpr::Sigma(..)) {
                TypeExpr::Sigma(y.clone(), a2, b2)
            } else {
                TypeExpr::Pi(y.clone(), a2, b2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_three_forms() {
        let d = parse("ctx G := (x : Unit)\ntype A in G := Sigma (y : Unit) (Eq x y)\nterm t : Unit in G := pair tt tt").unwrap();
        assert_eq!(d.len(), 3);
        match &d[1] {
            Decl::Type { ty: TypeExpr::Sigma(y, _, b), .. } => {
                assert_eq!(y, "y");
                assert!(matches!(**b, TypeExpr::Eq(..)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn both_argument_styles() {
        let a = parse("check tt == tt : Prod(Unit, Eq(tt, tt)) in ()").unwrap();
        let b = parse("check tt == tt : Prod Unit (Eq tt tt) in ()").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        match parse("ctx G := (x : Unit)\nterm t : Unit in G := y") {
            Err(TTError::Unbound { name, line, col }) => assert_eq!((name.as_str(), line, col), ("y", 2, 23)),
            other => panic!("{other:?}"),
        }
        match parse("ctx G := (x Unit)") {
            Err(TTError::Syntax { line: 1, col: 13, expected }) => assert_eq!(expected, "`:`"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn substitution_avoids_capture() {
        let t = TypeExpr::Sigma(
            "y".into(),
            Box::new(TypeExpr::Unit),
            Box::new(TypeExpr::Eq(
                Box::new(TermExpr::Var("x".into(), Pos::default())),
                Box::new(TermExpr::Var("y".into(), Pos::default())),
            )),
        );
        let s = subst_type(&t, "x", &TermExpr::Var("y".into(), Pos::default()));
        assert_eq!(s.to_string(), "Sigma (y' : Unit) (Eq(y, y'))");
    }
}
