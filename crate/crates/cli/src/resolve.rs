//! Turns a parsed document into core objects, checking names, labels and shapes.

use std::collections::{BTreeMap, BTreeSet};

use multimod_core::constructions::free_multimodule;
use multimod_core::duality::DualSelection;
use multimod_core::inner_product::InnerProduct;
use multimod_core::involution::{InvolutionEntry, MultimoduleInvolution};
use multimod_core::morphism::{Morphism, Signature, SignatureEntry as CoreEntry};
use multimod_core::multimodule::{Action, Multimodule, Side as CoreSide};
use multimod_core::{Algebra, AlgebraInvolution, AlgebraMap, Conjugation, FpModule, Mat, Modulus, Variance as CoreVariance};

use crate::ast::*;
use crate::diagnostic::Diagnostic;

#[derive(Debug, Clone)]
pub enum Entity {
    Algebra(Algebra),
    Conjugation(Conjugation),
    Involution {
        module: String,
        involution: MultimoduleInvolution,
    },
    Multimodule(Multimodule),
    Morphism(Morphism),
    InnerProduct(Box<InnerProduct>),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Algebra(_) => "algebra",
            Entity::Conjugation(_) => "conjugation",
            Entity::Involution { .. } => "involution",
            Entity::Multimodule(_) => "multimodule",
            Entity::Morphism(_) => "morphism",
            Entity::InnerProduct(_) => "innerproduct",
        }
    }
}

/// Every declared object by name, and the commands in document order.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub modulus: Option<Modulus>,
    pub entities: BTreeMap<String, Entity>,
    pub commands: Vec<CommandDecl>,
}

impl Env {
    pub fn multimodule(&self, name: &str) -> Option<&Multimodule> {
        match self.entities.get(name) {
            Some(Entity::Multimodule(m)) => Some(m),
            _ => None,
        }
    }
}

type RResult<T> = Result<T, Diagnostic>;

struct Resolver {
    env: Env,
    /// Names whose declaration failed; references to them are not reported again.
    failed: BTreeSet<String>,
    errors: Vec<Diagnostic>,
}

/// Resolves every declaration and command, collecting all errors.
pub fn resolve(doc: &Document) -> Result<Env, Vec<Diagnostic>> {
    let mut r = Resolver {
        env: Env::default(),
        failed: BTreeSet::new(),
        errors: Vec::new(),
    };
    for item in &doc.items {
        r.item(item);
    }
    if r.errors.is_empty() {
        Ok(r.env)
    } else {
        Err(r.errors)
    }
}

fn core_side(s: Side) -> CoreSide {
    match s {
        Side::Left => CoreSide::Left,
        Side::Right => CoreSide::Right,
    }
}

fn core_variance(v: Variance) -> CoreVariance {
    match v {
        Variance::Covariant => CoreVariance::Covariant,
        Variance::Contravariant => CoreVariance::Contravariant,
    }
}

fn at(span: Span) -> impl Fn(multimod_core::Error) -> Diagnostic {
    move |e| Diagnostic::error(span, e.to_string())
}

fn vector(v: &Vector, dim: usize, what: &str, span: Span) -> RResult<Vec<u64>> {
    match v {
        Vector::Zero => Ok(vec![0; dim]),
        Vector::Basis(_, k) if *k < dim => {
            let mut out = vec![0; dim];
            out[*k] = 1;
            Ok(out)
        }
        Vector::Basis(p, k) => Err(Diagnostic::error(span, format!("{what} has no basis element {p}{k}"))),
        Vector::Coords(c) if c.len() == dim => Ok(c.clone()),
        Vector::Coords(c) => Err(Diagnostic::error(
            span,
            format!("{what} needs vectors of length {dim}, found {}", c.len()),
        )),
    }
}

fn matrix(m: Modulus, rows: &Rows, nrows: usize, ncols: usize, what: &str, span: Span) -> RResult<Mat> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Diagnostic::error(span, format!("{what} must have {nrows} rows of length {ncols}")));
    }
    if nrows == 0 {
        return Ok(Mat::zeros(m, 0, ncols));
    }
    Mat::from_rows(m, ncols, rows).map_err(at(span))
}

impl Resolver {
    fn item(&mut self, item: &Item) {
        let (name, result) = match item {
            Item::Base(b) => {
                self.env.modulus = Modulus::new(b.modulus).ok();
                return;
            }
            Item::Command(c) => {
                match self.command(&c.command) {
                    Ok(()) => self.env.commands.push(c.clone()),
                    Err(Some(d)) => self.errors.push(d),
                    Err(None) => {}
                }
                return;
            }
            Item::Algebra(a) => (&a.name, self.algebra(a).map(Entity::Algebra)),
            Item::Conjugation(c) => (&c.name, self.conjugation(c).map(Entity::Conjugation)),
            Item::Involution(i) => (&i.name, self.involution(i)),
            Item::Multimodule(m) => (&m.name, self.multimodule(m).map(Entity::Multimodule)),
            Item::Morphism(m) => (&m.name, self.morphism(m).map(Entity::Morphism)),
            Item::InnerProduct(p) => (&p.name, self.inner_product(p).map(|x| Entity::InnerProduct(Box::new(x)))),
        };
        if self.env.entities.contains_key(name.as_str()) || self.failed.contains(name.as_str()) {
            self.errors
                .push(Diagnostic::error(name.span, format!("`{}` is already declared", name.as_str())));
            return;
        }
        match result {
            Ok(e) => {
                self.env.entities.insert(name.text.clone(), e);
            }
            Err(d) => {
                self.failed.insert(name.text.clone());
                if let Some(d) = d {
                    self.errors.push(d);
                }
            }
        }
    }

    fn modulus(&self, span: Span) -> Result<Modulus, Option<Diagnostic>> {
        self.env
            .modulus
            .ok_or_else(|| Some(Diagnostic::error(span, "no `base zmod` declaration precedes this")))
    }

    /// Looks up a name; `Err(None)` means it refers to a failed declaration.
    fn lookup(&self, name: &Name, kind: &str) -> Result<&Entity, Option<Diagnostic>> {
        match self.env.entities.get(name.as_str()) {
            Some(e) if e.kind() == kind || kind.is_empty() => Ok(e),
            Some(e) => Err(Some(Diagnostic::error(
                name.span,
                format!("`{}` is a{} {}, not a{} {kind}", name.as_str(), article(e.kind()), e.kind(), article(kind)),
            ))),
            None if self.failed.contains(name.as_str()) => Err(None),
            None => Err(Some(Diagnostic::error(
                name.span,
                format!("`{}` is not declared before this point", name.as_str()),
            ))),
        }
    }

    fn algebra_ref(&self, name: &Name) -> Result<Algebra, Option<Diagnostic>> {
        match self.lookup(name, "algebra")? {
            Entity::Algebra(a) => Ok(a.clone()),
            _ => unreachable!(),
        }
    }

    fn conjugation_ref(&self, name: &Name) -> Result<Conjugation, Option<Diagnostic>> {
        match self.lookup(name, "conjugation")? {
            Entity::Conjugation(c) => Ok(c.clone()),
            _ => unreachable!(),
        }
    }

    fn module_ref(&self, name: &Name) -> Result<Multimodule, Option<Diagnostic>> {
        match self.lookup(name, "multimodule")? {
            Entity::Multimodule(m) => Ok(m.clone()),
            _ => unreachable!(),
        }
    }

    fn algebra(&self, a: &AlgebraDecl) -> Result<Algebra, Option<Diagnostic>> {
        let m = self.modulus(a.span)?;
        let alg = match &a.body {
            AlgebraBody::Builtin(b) => match b {
                Builtin::Scalars => Algebra::scalars(m),
                Builtin::Dual => Algebra::dual_numbers(m),
                Builtin::Triangular => Algebra::upper_triangular(m),
                Builtin::Matrices => Algebra::matrices2(m),
                Builtin::Split => Algebra::split_pair(m),
                Builtin::SquareZero(k) => Algebra::square_zero(m, *k),
                Builtin::Poly(c) => {
                    if c.is_empty() {
                        return Err(Some(Diagnostic::error(a.span, "`poly` needs at least one coefficient")));
                    }
                    Algebra::polynomial_quotient(a.name.as_str(), m, c).map_err(at(a.span))?
                }
            },
            AlgebraBody::Table {
                rank,
                unit,
                products,
                base,
            } => {
                let k = *rank;
                if k == 0 {
                    return Err(Some(Diagnostic::error(a.span, "an algebra needs rank at least 1")));
                }
                let unit = vector(unit, k, "the algebra", a.span)?;
                let mut table: Vec<Option<Vec<u64>>> = vec![None; k * k];
                for p in products {
                    if p.left >= k || p.right >= k {
                        return Err(Some(Diagnostic::error(
                            a.span,
                            format!("product e{}*e{} is outside rank {k}", p.left, p.right),
                        )));
                    }
                    let slot = &mut table[p.left * k + p.right];
                    if slot.is_some() {
                        return Err(Some(Diagnostic::error(
                            a.span,
                            format!("product e{}*e{} is given twice", p.left, p.right),
                        )));
                    }
                    *slot = Some(vector(&p.value, k, "the algebra", a.span)?);
                }
                let table = table.into_iter().map(|v| v.unwrap_or_else(|| vec![0; k])).collect();
                let alg = Algebra::new(a.name.as_str(), m, k, table, unit).map_err(at(a.span))?;
                match base {
                    None => alg,
                    Some(b) => {
                        let ring = self.algebra_ref(&b.ring)?;
                        let map = matrix(m, &b.map, k, ring.rank(), "the base embedding", b.ring.span)?;
                        alg.with_base(ring, map).map_err(at(b.ring.span))?
                    }
                }
            }
        };
        Ok(alg.renamed(a.name.as_str()))
    }

    fn conjugation(&self, c: &ConjugationDecl) -> Result<Conjugation, Option<Diagnostic>> {
        let alg = self.algebra_ref(&c.algebra)?;
        let v = core_variance(c.variance);
        let Some(images) = &c.images else {
            return Ok(Conjugation::identity(&alg, v));
        };
        let k = alg.rank();
        let mut cols: Vec<Option<Vec<u64>>> = vec![None; k];
        for (i, img) in images {
            if *i >= k || cols[*i].is_some() {
                return Err(Some(Diagnostic::error(
                    c.span,
                    format!("image of e{i} is out of range or given twice"),
                )));
            }
            cols[*i] = Some(vector(img, k, "the algebra", c.span)?);
        }
        let cols: Vec<Vec<u64>> = cols
            .into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| Some(Diagnostic::error(c.span, format!("no image given for e{i}")))))
            .collect::<Result<_, _>>()?;
        let map = Mat::from_cols(alg.modulus(), k, &cols).map_err(at(c.span))?;
        Conjugation::new(alg, map, v).map_err(|e| Some(Diagnostic::error(c.span, e.to_string())))
    }

    fn label_algebra(&self, m: &Multimodule, label: &Name) -> RResult<Algebra> {
        m.action(label.as_str())
            .map(|a| a.algebra.clone())
            .map_err(|_| Diagnostic::error(label.span, format!("no action labelled `{}`", label.as_str())))
    }

    fn dagger(&self, alg: &Algebra, via: &Name) -> Result<AlgebraInvolution, Option<Diagnostic>> {
        let c = self.conjugation_ref(via)?;
        if c.algebra() != alg {
            return Err(Some(Diagnostic::error(
                via.span,
                format!("`{}` is a conjugation of a different algebra", via.as_str()),
            )));
        }
        AlgebraInvolution::plain(alg.clone(), c.map().clone(), c.variance()).map_err(|e| Some(at(via.span)(e)))
    }

    fn involution(&self, i: &InvolutionDecl) -> Result<Entity, Option<Diagnostic>> {
        let m = self.module_ref(&i.module)?;
        let mut entries: Vec<InvolutionEntry> = Vec::new();
        for p in &i.pairs {
            let alg = self.label_algebra(&m, &p.label)?;
            let other = self.label_algebra(&m, &p.partner)?;
            if alg != other {
                return Err(Some(Diagnostic::error(
                    p.partner.span,
                    format!("`{}` and `{}` act by different algebras", p.label.as_str(), p.partner.as_str()),
                )));
            }
            let dagger = self.dagger(&alg, &p.via)?;
            let mut add = |label: &Name, partner: &Name| -> RResult<()> {
                if entries.iter().any(|e| e.label == label.as_str()) {
                    return Err(Diagnostic::error(label.span, format!("`{}` is paired twice", label.as_str())));
                }
                entries.push(InvolutionEntry {
                    label: label.text.clone(),
                    partner: partner.text.clone(),
                    dagger: dagger.clone(),
                });
                Ok(())
            };
            add(&p.label, &p.partner)?;
            if p.label != p.partner {
                add(&p.partner, &p.label)?;
            }
        }
        if let Some(a) = m.actions().iter().find(|a| !entries.iter().any(|e| e.label == a.label)) {
            return Err(Some(Diagnostic::error(i.span, format!("label `{}` is not paired", a.label))));
        }
        let g = m.ngens();
        let star = matrix(m.modulus(), &i.star, g, g, "the star matrix", i.span)?;
        Ok(Entity::Involution {
            module: i.module.text.clone(),
            involution: MultimoduleInvolution::new(entries, star),
        })
    }

    fn multimodule(&self, d: &MultimoduleDecl) -> Result<Multimodule, Option<Diagnostic>> {
        let m = self.modulus(d.span)?;
        let span = d.span;
        Ok(match &d.body {
            MultimoduleBody::Regular { algebra, left, right } => {
                Multimodule::regular(&self.algebra_ref(algebra)?, left.as_str(), right.as_str()).map_err(at(span))?
            }
            MultimoduleBody::LeftRegular { algebra, label } => {
                Multimodule::left_regular(&self.algebra_ref(algebra)?, label.as_str()).map_err(at(span))?
            }
            MultimoduleBody::RightRegular { algebra, label } => {
                Multimodule::right_regular(&self.algebra_ref(algebra)?, label.as_str()).map_err(at(span))?
            }
            MultimoduleBody::Free { points, lefts, rights } => {
                let conv = |v: &[(Name, Name)]| -> Result<Vec<(String, Algebra)>, Option<Diagnostic>> {
                    v.iter().map(|(a, l)| Ok((l.text.clone(), self.algebra_ref(a)?))).collect()
                };
                free_multimodule(m, *points, &conv(lefts)?, &conv(rights)?)
                    .map_err(at(span))?
                    .result
            }
            MultimoduleBody::Explicit {
                rank,
                relations,
                actions,
            } => {
                let g = *rank;
                if relations.iter().any(|r| r.len() != g) {
                    return Err(Some(Diagnostic::error(span, format!("relations must have length {g}"))));
                }
                let carrier = FpModule::new(m, g, relations).map_err(at(span))?;
                let mut out = Vec::new();
                for a in actions {
                    let alg = self.algebra_ref(&a.algebra)?;
                    let mut ops = vec![Mat::zeros(m, g, g); alg.rank()];
                    let mut seen = BTreeSet::new();
                    for e in &a.entries {
                        if e.element >= alg.rank() || e.generator >= g {
                            return Err(Some(Diagnostic::error(
                                a.label.span,
                                format!("entry e{} on g{} is out of range", e.element, e.generator),
                            )));
                        }
                        if !seen.insert((e.element, e.generator)) {
                            return Err(Some(Diagnostic::error(
                                a.label.span,
                                format!("entry e{} on g{} is given twice", e.element, e.generator),
                            )));
                        }
                        let v = vector(&e.value, g, "the carrier", a.label.span)?;
                        for (r, x) in v.into_iter().enumerate() {
                            ops[e.element].set(r, e.generator, x);
                        }
                    }
                    out.push(Action {
                        label: a.label.text.clone(),
                        side: core_side(a.side),
                        algebra: alg,
                        ops,
                    });
                }
                Multimodule::new(carrier, out).map_err(at(span))?
            }
        })
    }

    fn morphism(&self, d: &MorphismDecl) -> Result<Morphism, Option<Diagnostic>> {
        let src = self.module_ref(&d.source)?;
        let tgt = self.module_ref(&d.target)?;
        let sig = match &d.signature {
            None => Signature::matching(&src, &tgt).map_err(at(d.span))?,
            Some(entries) => {
                let mut out = Vec::new();
                for e in entries {
                    let a = self.label_algebra(&src, &e.source)?;
                    let b = self.label_algebra(&tgt, &e.target)?;
                    let eta = match &e.via {
                        None if a == b => AlgebraMap::identity(&a),
                        None => {
                            return Err(Some(Diagnostic::error(
                                e.target.span,
                                "labels with different algebras need a `via` conjugation",
                            )))
                        }
                        Some(v) => {
                            let c = self.conjugation_ref(v)?;
                            if c.algebra() != &a || a != b {
                                return Err(Some(Diagnostic::error(
                                    v.span,
                                    format!("`{}` does not map between these algebras", v.as_str()),
                                )));
                            }
                            c.as_map()
                        }
                    };
                    out.push(CoreEntry {
                        source: e.source.text.clone(),
                        target: e.target.text.clone(),
                        eta,
                        phi: None,
                    });
                }
                Signature::new(out)
            }
        };
        let map = matrix(src.modulus(), &d.matrix, tgt.ngens(), src.ngens(), "the morphism matrix", d.span)?;
        Morphism::new(src, tgt, sig, map).map_err(|e| Some(at(d.span)(e)))
    }

    fn selection(&self, m: &Multimodule, left: &[Name], right: &[Name]) -> RResult<DualSelection> {
        let check = |names: &[Name], side: CoreSide| -> RResult<Vec<String>> {
            let labels = m.labels(side);
            let mut out: Vec<String> = Vec::new();
            for n in names {
                if !labels.contains(&n.text) {
                    return Err(Diagnostic::error(
                        n.span,
                        format!("no {} action labelled `{}`", side.as_str(), n.as_str()),
                    ));
                }
                if out.contains(&n.text) {
                    return Err(Diagnostic::error(n.span, format!("`{}` is selected twice", n.as_str())));
                }
                out.push(n.text.clone());
            }
            Ok(out)
        };
        let l = check(left, CoreSide::Left)?;
        let r = check(right, CoreSide::Right)?;
        let lr: Vec<&str> = l.iter().map(String::as_str).collect();
        let rr: Vec<&str> = r.iter().map(String::as_str).collect();
        Ok(DualSelection::new(&lr, &rr))
    }

    /// Splits a label list by side.
    fn sided(&self, m: &Multimodule, names: &[Name]) -> RResult<DualSelection> {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for n in names {
            match m.action(n.as_str()) {
                Ok(a) if a.side == CoreSide::Left => l.push(n.clone()),
                Ok(_) => r.push(n.clone()),
                Err(_) => {
                    return Err(Diagnostic::error(n.span, format!("no action labelled `{}`", n.as_str())));
                }
            }
        }
        self.selection(m, &l, &r)
    }

    fn inner_product(&self, d: &InnerProductDecl) -> Result<InnerProduct, Option<Diagnostic>> {
        let m = self.module_ref(&d.module)?;
        let first = self.sided(&m, &d.first)?;
        let second = self.sided(&m, &d.second)?;
        let mut stars = Vec::new();
        for (label, via) in &d.stars {
            let alg = self.label_algebra(&m, label)?;
            if stars.iter().any(|(l, _): &(String, AlgebraInvolution)| l == label.as_str()) {
                return Err(Some(Diagnostic::error(label.span, format!("`{}` has two stars", label.as_str()))));
            }
            stars.push((label.text.clone(), self.dagger(&alg, via)?));
        }
        let mut t = 1usize;
        for n in d.first.iter().chain(&d.second) {
            t = t.saturating_mul(self.label_algebra(&m, n)?.rank());
        }
        let g = m.ngens();
        let mut form = Mat::zeros(m.modulus(), t, g * g);
        let mut seen = BTreeSet::new();
        for v in &d.values {
            if v.first >= g || v.second >= g || !seen.insert((v.first, v.second)) {
                return Err(Some(Diagnostic::error(
                    d.span,
                    format!("value at <g{}, g{}> is out of range or given twice", v.first, v.second),
                )));
            }
            let x = vector(&v.value, t, "the target", d.span)?;
            for (r, c) in x.into_iter().enumerate() {
                form.set(r, v.first * g + v.second, c);
            }
        }
        InnerProduct::general(m, stars, first, second, form).map_err(|e| Some(at(d.span)(e)))
    }

    fn labels_of(&self, m: &Multimodule, names: &[Name]) -> RResult<()> {
        for n in names {
            self.label_algebra(m, n)?;
        }
        Ok(())
    }

    fn pair_labels(&self, a: &Multimodule, b: &Multimodule, pairs: &[(Name, Name)]) -> RResult<()> {
        for (x, y) in pairs {
            self.label_algebra(a, x)?;
            self.label_algebra(b, y)?;
        }
        Ok(())
    }

    fn command(&self, c: &Command) -> Result<(), Option<Diagnostic>> {
        match c {
            Command::Check(n) => {
                self.lookup(n, "")?;
            }
            Command::Classify(n) => {
                self.lookup(n, "innerproduct")?;
            }
            Command::Dual(m, s) | Command::Semiadjunction(m, s) | Command::Reflexive(m, s) => {
                let m = self.module_ref(m)?;
                self.selection(&m, &s.left, &s.right)?;
            }
            Command::Hom(a, b) | Command::Iso(a, b) => {
                self.module_ref(a)?;
                self.module_ref(b)?;
            }
            Command::Tensor(a, b, pairs) => {
                let (a, b) = (self.module_ref(a)?, self.module_ref(b)?);
                self.pair_labels(&a, &b, pairs)?;
            }
            Command::Trace(m, pairs) => {
                let m = self.module_ref(m)?;
                self.pair_labels(&m, &m, pairs)?;
            }
            Command::Diff1(a, b, sel) => {
                let a = self.module_ref(a)?;
                self.module_ref(b)?;
                if let Some(s) = sel {
                    self.labels_of(&a, s)?;
                }
            }
        }
        Ok(())
    }
}

fn article(kind: &str) -> &'static str {
    if kind.starts_with(['a', 'e', 'i', 'o', 'u']) {
        "n"
    } else {
        ""
    }
}
