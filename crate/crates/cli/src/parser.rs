//! Recursive-descent parser producing a [`Document`].
//!
//! Integer literals inside vectors and matrices are reduced modulo the
//! declared base, so `base zmod <n>;` must precede them. A warning is
//! recorded whenever reduction changes a literal.

use multimod_core::Modulus;

use crate::ast::*;
use crate::diagnostic::Diagnostic;
use crate::lexer::{lex, Tok, Token};

/// A parsed document with the warnings raised while reading it.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub document: Document,
    pub warnings: Vec<Diagnostic>,
}

/// Parses source text; on failure returns the error followed by any warnings seen so far.
pub fn parse(src: &str) -> Result<Parsed, Vec<Diagnostic>> {
    let tokens = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser {
        tokens,
        pos: 0,
        modulus: None,
        warnings: Vec::new(),
    };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        match p.item() {
            Ok(item) => items.push(item),
            Err(d) => {
                let mut out = vec![d];
                out.append(&mut p.warnings);
                return Err(out);
            }
        }
    }
    Ok(Parsed {
        document: Document { items },
        warnings: p.warnings,
    })
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    modulus: Option<Modulus>,
    warnings: Vec<Diagnostic>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        Diagnostic::error(
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", tok.symbol())))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.bump().span;
                Ok(Name { text, span })
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn count(&mut self) -> PResult<usize> {
        match *self.peek() {
            Tok::Int(n) => {
                let span = self.bump().span;
                usize::try_from(n).map_err(|_| Diagnostic::error(span, "count is too large"))
            }
            _ => Err(self.unexpected("a count")),
        }
    }

    /// A basis symbol such as `e3`, returning its index.
    fn basis(&mut self, prefix: char) -> PResult<usize> {
        if let Tok::Ident(s) = self.peek() {
            if let Some(k) = basis_index(s, prefix) {
                self.bump();
                return Ok(k);
            }
        }
        Err(self.unexpected(&format!("a basis symbol `{prefix}<k>`")))
    }

    /// An integer literal reduced modulo the base.
    fn residue(&mut self) -> PResult<u64> {
        let span = self.span();
        let negative = self.eat(&Tok::Minus);
        let n = match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                n
            }
            _ => return Err(self.unexpected("an integer")),
        };
        let m = self
            .modulus
            .ok_or_else(|| Diagnostic::error(span, "integer literal before the `base zmod` declaration"))?;
        let q = m.value() as u128;
        let r = if negative { (q - n % q) % q } else { n % q } as u64;
        if negative || n != r as u128 {
            let lit = if negative { format!("-{n}") } else { n.to_string() };
            self.warnings
                .push(Diagnostic::warning(span, format!("literal {lit} reduced to {r} modulo {q}")));
        }
        Ok(r)
    }

    fn residues(&mut self) -> PResult<Vec<u64>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                out.push(self.residue()?);
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(out)
    }

    fn vector(&mut self, prefix: char) -> PResult<Vector> {
        match self.peek().clone() {
            Tok::LBracket => Ok(Vector::Coords(self.residues()?)),
            Tok::Int(0) => {
                self.bump();
                Ok(Vector::Zero)
            }
            Tok::Ident(s) if basis_index(&s, prefix).is_some() => Ok(Vector::Basis(prefix, self.basis(prefix)?)),
            _ => Err(self.unexpected(&format!("a vector `[..]`, `{prefix}<k>` or `0`"))),
        }
    }

    fn rows(&mut self) -> PResult<Rows> {
        self.keyword("rows")?;
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                out.push(self.residues()?);
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(out)
    }

    fn labels(&mut self) -> PResult<Vec<Name>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                out.push(self.name()?);
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(out)
    }

    fn pairs(&mut self) -> PResult<Vec<(Name, Name)>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                self.expect(Tok::LParen)?;
                let a = self.name()?;
                self.expect(Tok::Comma)?;
                let b = self.name()?;
                self.expect(Tok::RParen)?;
                out.push((a, b));
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(out)
    }

    fn selection(&mut self) -> PResult<Selection> {
        let mut sel = Selection::default();
        if self.is_keyword("I") && self.peek_at(1) == &Tok::Eq {
            self.bump();
            self.bump();
            sel.left = self.labels()?;
        }
        if self.is_keyword("J") && self.peek_at(1) == &Tok::Eq {
            self.bump();
            self.bump();
            sel.right = self.labels()?;
        }
        Ok(sel)
    }

    fn item(&mut self) -> PResult<Item> {
        let span = self.span();
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected("a declaration or command")),
        };
        self.bump();
        let item = match kw.as_str() {
            "base" => self.base(span)?,
            "algebra" => Item::Algebra(self.algebra(span)?),
            "conjugation" => Item::Conjugation(self.conjugation(span)?),
            "involution" => Item::Involution(self.involution(span)?),
            "multimodule" => Item::Multimodule(self.multimodule(span)?),
            "morphism" => Item::Morphism(self.morphism(span)?),
            "innerproduct" => Item::InnerProduct(self.inner_product(span)?),
            _ => {
                let command = self.command(&kw, span)?;
                self.expect(Tok::Semi)?;
                Item::Command(CommandDecl { command, span })
            }
        };
        Ok(item)
    }

    fn base(&mut self, span: Span) -> PResult<Item> {
        self.keyword("zmod")?;
        let at = self.span();
        let n = self.count()?;
        if self.modulus.is_some() {
            return Err(Diagnostic::error(span, "the base ring is declared twice"));
        }
        let m = Modulus::new(n as u64)
            .map_err(|_| Diagnostic::error(at, format!("modulus {n} is outside 2..2^31")))?;
        self.modulus = Some(m);
        self.expect(Tok::Semi)?;
        Ok(Item::Base(BaseDecl { modulus: m.value(), span }))
    }

    fn algebra(&mut self, span: Span) -> PResult<AlgebraDecl> {
        let name = self.name()?;
        if self.eat(&Tok::Eq) {
            let at = self.span();
            let kw = self.name()?;
            let b = match kw.as_str() {
                "scalars" => Builtin::Scalars,
                "dual_numbers" => Builtin::Dual,
                "upper_triangular" => Builtin::Triangular,
                "matrices2" => Builtin::Matrices,
                "split_pair" => Builtin::Split,
                "square_zero" => Builtin::SquareZero(self.count()?),
                "poly" => Builtin::Poly(self.residues()?),
                other => return Err(Diagnostic::error(at, format!("unknown algebra `{other}`"))),
            };
            self.expect(Tok::Semi)?;
            return Ok(AlgebraDecl {
                name,
                body: AlgebraBody::Builtin(b),
                span,
            });
        }
        self.expect(Tok::LBrace)?;
        let (mut rank, mut unit, mut base) = (None, None, None);
        let mut products = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let at = self.span();
            let clause = self.name()?;
            match clause.as_str() {
                "rank" if rank.is_none() => rank = Some(self.count()?),
                "unit" if unit.is_none() => unit = Some(self.vector('e')?),
                "base" if base.is_none() => {
                    let ring = self.name()?;
                    self.keyword("via")?;
                    base = Some(BaseClause { ring, map: self.rows()? });
                }
                "mul" => {
                    let left = self.basis('e')?;
                    self.expect(Tok::Star)?;
                    let right = self.basis('e')?;
                    self.expect(Tok::Eq)?;
                    products.push(Product {
                        left,
                        right,
                        value: self.vector('e')?,
                    });
                }
                "rank" | "unit" | "base" => {
                    return Err(Diagnostic::error(at, format!("`{}` is given twice", clause.as_str())))
                }
                _ => return Err(Diagnostic::error(at, format!("unknown algebra clause `{}`", clause.as_str()))),
            }
            self.expect(Tok::Semi)?;
        }
        let rank = rank.ok_or_else(|| Diagnostic::error(span, format!("algebra `{}` has no `rank` clause", name.text)))?;
        let unit = unit.ok_or_else(|| Diagnostic::error(span, format!("algebra `{}` has no `unit` clause", name.text)))?;
        Ok(AlgebraDecl {
            name,
            body: AlgebraBody::Table {
                rank,
                unit,
                products,
                base,
            },
            span,
        })
    }

    fn variance(&mut self) -> PResult<Variance> {
        if self.eat_keyword("covariant") {
            Ok(Variance::Covariant)
        } else if self.eat_keyword("contravariant") {
            Ok(Variance::Contravariant)
        } else {
            Err(self.unexpected("`covariant` or `contravariant`"))
        }
    }

    fn conjugation(&mut self, span: Span) -> PResult<ConjugationDecl> {
        let name = self.name()?;
        self.keyword("on")?;
        let algebra = self.name()?;
        let variance = self.variance()?;
        let images = if self.eat_keyword("identity") {
            self.expect(Tok::Semi)?;
            None
        } else {
            self.expect(Tok::LBrace)?;
            let mut images = Vec::new();
            while !self.eat(&Tok::RBrace) {
                let k = self.basis('e')?;
                self.expect(Tok::Arrow)?;
                images.push((k, self.vector('e')?));
                self.expect(Tok::Semi)?;
            }
            Some(images)
        };
        Ok(ConjugationDecl {
            name,
            algebra,
            variance,
            images,
            span,
        })
    }

    fn involution(&mut self, span: Span) -> PResult<InvolutionDecl> {
        let name = self.name()?;
        self.keyword("on")?;
        let module = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut pairs = Vec::new();
        let mut star = None;
        while !self.eat(&Tok::RBrace) {
            if self.is_keyword("star") && self.peek_at(1) == &Tok::Ident("rows".into()) {
                let at = self.span();
                self.bump();
                if star.is_some() {
                    return Err(Diagnostic::error(at, "`star` is given twice"));
                }
                star = Some(self.rows()?);
            } else {
                let label = self.name()?;
                self.expect(Tok::Swap)?;
                let partner = self.name()?;
                self.keyword("via")?;
                let via = self.name()?;
                pairs.push(InvolutionPair { label, partner, via });
            }
            self.expect(Tok::Semi)?;
        }
        let star = star.ok_or_else(|| Diagnostic::error(span, format!("involution `{}` has no `star` clause", name.text)))?;
        Ok(InvolutionDecl {
            name,
            module,
            pairs,
            star,
            span,
        })
    }

    fn algebra_labels(&mut self) -> PResult<Vec<(Name, Name)>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                let a = self.name()?;
                self.keyword("as")?;
                out.push((a, self.name()?));
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(out)
    }

    fn multimodule(&mut self, span: Span) -> PResult<MultimoduleDecl> {
        let name = self.name()?;
        if self.eat(&Tok::Eq) {
            let at = self.span();
            let kw = self.name()?;
            let body = match kw.as_str() {
                "regular" => {
                    let algebra = self.name()?;
                    self.keyword("as")?;
                    let left = self.name()?;
                    let right = self.name()?;
                    MultimoduleBody::Regular { algebra, left, right }
                }
                "left_regular" | "right_regular" => {
                    let algebra = self.name()?;
                    self.keyword("as")?;
                    let label = self.name()?;
                    if kw.as_str() == "left_regular" {
                        MultimoduleBody::LeftRegular { algebra, label }
                    } else {
                        MultimoduleBody::RightRegular { algebra, label }
                    }
                }
                "free" => {
                    let points = self.count()?;
                    let lefts = if self.eat_keyword("left") { self.algebra_labels()? } else { Vec::new() };
                    let rights = if self.eat_keyword("right") { self.algebra_labels()? } else { Vec::new() };
                    MultimoduleBody::Free { points, lefts, rights }
                }
                other => return Err(Diagnostic::error(at, format!("unknown multimodule constructor `{other}`"))),
            };
            self.expect(Tok::Semi)?;
            return Ok(MultimoduleDecl { name, body, span });
        }
        self.expect(Tok::LBrace)?;
        self.keyword("carrier")?;
        self.keyword("rank")?;
        let rank = self.count()?;
        let relations = if self.eat_keyword("relations") { self.rows()? } else { Vec::new() };
        self.expect(Tok::Semi)?;
        let mut actions = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let side = if self.eat_keyword("left") {
                Side::Left
            } else if self.eat_keyword("right") {
                Side::Right
            } else {
                return Err(self.unexpected("`left`, `right` or `}`"));
            };
            let algebra = self.name()?;
            self.keyword("as")?;
            let label = self.name()?;
            self.expect(Tok::LBrace)?;
            let mut entries = Vec::new();
            while !self.eat(&Tok::RBrace) {
                let (element, generator) = match side {
                    Side::Left => {
                        let e = self.basis('e')?;
                        self.expect(Tok::Dot)?;
                        (e, self.basis('g')?)
                    }
                    Side::Right => {
                        let g = self.basis('g')?;
                        self.expect(Tok::Dot)?;
                        (self.basis('e')?, g)
                    }
                };
                self.expect(Tok::Eq)?;
                let value = self.vector('g')?;
                self.expect(Tok::Semi)?;
                entries.push(ActionEntry {
                    element,
                    generator,
                    value,
                });
            }
            self.eat(&Tok::Semi);
            actions.push(ActionDecl {
                side,
                algebra,
                label,
                entries,
            });
        }
        Ok(MultimoduleDecl {
            name,
            body: MultimoduleBody::Explicit {
                rank,
                relations,
                actions,
            },
            span,
        })
    }

    fn morphism(&mut self, span: Span) -> PResult<MorphismDecl> {
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let source = self.name()?;
        self.expect(Tok::Arrow)?;
        let target = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut signature = None;
        if self.eat_keyword("signature") {
            self.expect(Tok::LBracket)?;
            let mut entries = Vec::new();
            if !self.eat(&Tok::RBracket) {
                loop {
                    let s = self.name()?;
                    self.expect(Tok::Arrow)?;
                    let t = self.name()?;
                    let via = if self.eat_keyword("via") { Some(self.name()?) } else { None };
                    entries.push(SignatureEntry {
                        source: s,
                        target: t,
                        via,
                    });
                    if self.eat(&Tok::RBracket) {
                        break;
                    }
                    self.expect(Tok::Comma)?;
                }
            }
            self.expect(Tok::Semi)?;
            signature = Some(entries);
        }
        self.keyword("matrix")?;
        let matrix = self.rows()?;
        self.expect(Tok::Semi)?;
        self.expect(Tok::RBrace)?;
        Ok(MorphismDecl {
            name,
            source,
            target,
            signature,
            matrix,
            span,
        })
    }

    fn inner_product(&mut self, span: Span) -> PResult<InnerProductDecl> {
        let name = self.name()?;
        self.keyword("on")?;
        let module = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut slots: Option<(Vec<Name>, Vec<Name>)> = None;
        let mut stars = Vec::new();
        let mut values = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let at = self.span();
            if self.eat(&Tok::Lt) {
                let first = self.basis('g')?;
                self.expect(Tok::Comma)?;
                let second = self.basis('g')?;
                self.expect(Tok::Gt)?;
                self.expect(Tok::Eq)?;
                values.push(FormEntry {
                    first,
                    second,
                    value: self.vector('t')?,
                });
            } else {
                let clause = self.name()?;
                match clause.as_str() {
                    "right" | "left" | "slots" if slots.is_some() => {
                        return Err(Diagnostic::error(at, "the slot selection is given twice"))
                    }
                    "right" => slots = Some((Vec::new(), self.labels()?)),
                    "left" => slots = Some((self.labels()?, Vec::new())),
                    "slots" => {
                        let first = self.labels()?;
                        slots = Some((first, self.labels()?));
                    }
                    "star" => {
                        let label = self.name()?;
                        self.keyword("via")?;
                        stars.push((label, self.name()?));
                    }
                    other => return Err(Diagnostic::error(at, format!("unknown inner product clause `{other}`"))),
                }
            }
            self.expect(Tok::Semi)?;
        }
        let (first, second) = slots.ok_or_else(|| {
            Diagnostic::error(span, format!("inner product `{}` has no `right`, `left` or `slots` clause", name.text))
        })?;
        Ok(InnerProductDecl {
            name,
            module,
            first,
            second,
            stars,
            values,
            span,
        })
    }

    fn command(&mut self, kw: &str, span: Span) -> PResult<Command> {
        Ok(match kw {
            "check" => Command::Check(self.name()?),
            "classify" => Command::Classify(self.name()?),
            "dual" => {
                let m = self.name()?;
                Command::Dual(m, self.selection()?)
            }
            "reflexive" => {
                let m = self.name()?;
                Command::Reflexive(m, self.selection()?)
            }
            "hom" | "iso" => {
                let a = self.name()?;
                let b = self.name()?;
                if kw == "hom" {
                    Command::Hom(a, b)
                } else {
                    Command::Iso(a, b)
                }
            }
            "tensor" => {
                let a = self.name()?;
                let b = self.name()?;
                let pairs = if self.eat_keyword("contract") { self.pairs()? } else { Vec::new() };
                Command::Tensor(a, b, pairs)
            }
            "trace" => {
                let m = self.name()?;
                self.keyword("pairs")?;
                Command::Trace(m, self.pairs()?)
            }
            "diff1" => {
                let a = self.name()?;
                let b = self.name()?;
                let select = if self.eat_keyword("select") { Some(self.labels()?) } else { None };
                Command::Diff1(a, b, select)
            }
            "verify" => {
                self.keyword("semiadjunction")?;
                let m = self.name()?;
                Command::Semiadjunction(m, self.selection()?)
            }
            other => return Err(Diagnostic::error(span, format!("unknown declaration or command `{other}`"))),
        })
    }
}

fn basis_index(s: &str, prefix: char) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || (rest.len() > 1 && rest.starts_with('0')) {
        return None;
    }
    rest.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(src: &str) -> Diagnostic {
        parse(src).unwrap_err().remove(0)
    }

    #[test]
    fn one_algebra() {
        let p = parse("base zmod 5; algebra A { rank 1; unit e0; mul e0*e0 = e0; }").unwrap();
        assert_eq!(p.document.items.len(), 2);
        match &p.document.items[1] {
            Item::Algebra(a) => assert_eq!(a.name.as_str(), "A"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_unit_points_at_the_block() {
        let d = err("base zmod 5;\nalgebra A { rank 1; mul e0*e0 = e0; }");
        assert_eq!((d.span.line, d.span.col), (2, 1));
        assert!(d.message.contains("unit"));
    }

    #[test]
    fn literals_are_reduced_with_a_warning() {
        let p = parse("base zmod 5; algebra A { rank 1; unit [6]; }").unwrap();
        assert_eq!(p.warnings.len(), 1);
        match &p.document.items[1] {
            Item::Algebra(AlgebraDecl {
                body: AlgebraBody::Table { unit, .. },
                ..
            }) => assert_eq!(unit, &Vector::Coords(vec![1])),
            other => panic!("{other:?}"),
        }
        let p = parse("base zmod 5; algebra A { rank 1; unit [-1]; }").unwrap();
        assert!(p.warnings[0].message.contains("-1 reduced to 4"));
    }

    #[test]
    fn literals_need_a_base() {
        assert!(err("algebra A { rank 1; unit [1]; }").message.contains("base"));
    }

    #[test]
    fn commands_parse() {
        let src = "base zmod 3;
            dual M I=[L] J=[R];
            verify semiadjunction M J=[R];
            tensor M N contract [(R, L)];
            trace T pairs [(L, R')];
            diff1 M M select [L];";
        let p = parse(src).unwrap();
        assert_eq!(p.document.items.len(), 6);
        match &p.document.items[2] {
            Item::Command(CommandDecl {
                command: Command::Semiadjunction(m, sel),
                ..
            }) => {
                assert_eq!(m.as_str(), "M");
                assert!(sel.left.is_empty());
                assert_eq!(sel.right[0].as_str(), "R");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let d = err("base zmod 3;\ncheck ;");
        assert_eq!((d.span.line, d.span.col), (2, 7));
        assert!(err("base zmod 1;").message.contains("modulus"));
        assert!(err("base zmod 3; base zmod 5;").message.contains("twice"));
    }
}
