//! Canonical source text for a [`Document`]; parsing the output gives back the same tree.

use std::fmt::{self, Display, Write};

use crate::ast::*;

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn coords(v: &[u64]) -> String {
    format!("[{}]", join(v))
}

fn rows(r: &Rows) -> String {
    format!("rows [{}]", r.iter().map(|x| coords(x)).collect::<Vec<_>>().join(", "))
}

fn names(v: &[Name]) -> String {
    format!("[{}]", v.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(", "))
}

fn pairs(v: &[(Name, Name)]) -> String {
    let inner: Vec<String> = v.iter().map(|(a, b)| format!("({}, {})", a.as_str(), b.as_str())).collect();
    format!("[{}]", inner.join(", "))
}

fn algebra_labels(v: &[(Name, Name)]) -> String {
    let inner: Vec<String> = v.iter().map(|(a, l)| format!("{} as {}", a.as_str(), l.as_str())).collect();
    format!("[{}]", inner.join(", "))
}

fn selection(s: &Selection) -> String {
    let mut out = String::new();
    if !s.left.is_empty() {
        write!(out, " I={}", names(&s.left)).unwrap();
    }
    if !s.right.is_empty() {
        write!(out, " J={}", names(&s.right)).unwrap();
    }
    out
}

impl Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vector::Coords(v) => f.write_str(&coords(v)),
            Vector::Basis(p, k) => write!(f, "{p}{k}"),
            Vector::Zero => f.write_str("0"),
        }
    }
}

impl Display for Variance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variance::Covariant => "covariant",
            Variance::Contravariant => "contravariant",
        })
    }
}

impl Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = self.keyword();
        match self {
            Command::Check(n) | Command::Classify(n) => write!(f, "{kw} {};", n.as_str()),
            Command::Dual(m, s) | Command::Semiadjunction(m, s) | Command::Reflexive(m, s) => {
                write!(f, "{kw} {}{};", m.as_str(), selection(s))
            }
            Command::Hom(a, b) | Command::Iso(a, b) => write!(f, "{kw} {} {};", a.as_str(), b.as_str()),
            Command::Tensor(a, b, p) => {
                write!(f, "{kw} {} {}", a.as_str(), b.as_str())?;
                if !p.is_empty() {
                    write!(f, " contract {}", pairs(p))?;
                }
                f.write_str(";")
            }
            Command::Trace(m, p) => write!(f, "{kw} {} pairs {};", m.as_str(), pairs(p)),
            Command::Diff1(a, b, sel) => {
                write!(f, "{kw} {} {}", a.as_str(), b.as_str())?;
                if let Some(s) = sel {
                    write!(f, " select {}", names(s))?;
                }
                f.write_str(";")
            }
        }
    }
}

impl Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Base(b) => writeln!(f, "base zmod {};", b.modulus),
            Item::Algebra(a) => match &a.body {
                AlgebraBody::Builtin(b) => {
                    write!(f, "algebra {} = {}", a.name.as_str(), b.keyword())?;
                    match b {
                        Builtin::SquareZero(k) => write!(f, " {k}")?,
                        Builtin::Poly(c) => write!(f, " {}", coords(c))?,
                        _ => {}
                    }
                    writeln!(f, ";")
                }
                AlgebraBody::Table {
                    rank,
                    unit,
                    products,
                    base,
                } => {
                    writeln!(f, "algebra {} {{", a.name.as_str())?;
                    writeln!(f, "  rank {rank};")?;
                    writeln!(f, "  unit {unit};")?;
                    for p in products {
                        writeln!(f, "  mul e{}*e{} = {};", p.left, p.right, p.value)?;
                    }
                    if let Some(b) = base {
                        writeln!(f, "  base {} via {};", b.ring.as_str(), rows(&b.map))?;
                    }
                    writeln!(f, "}}")
                }
            },
            Item::Conjugation(c) => {
                write!(f, "conjugation {} on {} {}", c.name.as_str(), c.algebra.as_str(), c.variance)?;
                match &c.images {
                    None => writeln!(f, " identity;"),
                    Some(images) => {
                        writeln!(f, " {{")?;
                        for (k, v) in images {
                            writeln!(f, "  e{k} -> {v};")?;
                        }
                        writeln!(f, "}}")
                    }
                }
            }
            Item::Involution(i) => {
                writeln!(f, "involution {} on {} {{", i.name.as_str(), i.module.as_str())?;
                for p in &i.pairs {
                    writeln!(f, "  {} <-> {} via {};", p.label.as_str(), p.partner.as_str(), p.via.as_str())?;
                }
                writeln!(f, "  star {};", rows(&i.star))?;
                writeln!(f, "}}")
            }
            Item::Multimodule(m) => {
                let name = m.name.as_str();
                match &m.body {
                    MultimoduleBody::Regular { algebra, left, right } => writeln!(
                        f,
                        "multimodule {name} = regular {} as {} {};",
                        algebra.as_str(),
                        left.as_str(),
                        right.as_str()
                    ),
                    MultimoduleBody::LeftRegular { algebra, label } => {
                        writeln!(f, "multimodule {name} = left_regular {} as {};", algebra.as_str(), label.as_str())
                    }
                    MultimoduleBody::RightRegular { algebra, label } => {
                        writeln!(f, "multimodule {name} = right_regular {} as {};", algebra.as_str(), label.as_str())
                    }
                    MultimoduleBody::Free { points, lefts, rights } => {
                        write!(f, "multimodule {name} = free {points}")?;
                        if !lefts.is_empty() {
                            write!(f, " left {}", algebra_labels(lefts))?;
                        }
                        if !rights.is_empty() {
                            write!(f, " right {}", algebra_labels(rights))?;
                        }
                        writeln!(f, ";")
                    }
                    MultimoduleBody::Explicit {
                        rank,
                        relations,
                        actions,
                    } => {
                        writeln!(f, "multimodule {name} {{")?;
                        write!(f, "  carrier rank {rank}")?;
                        if !relations.is_empty() {
                            write!(f, " relations {}", rows(relations))?;
                        }
                        writeln!(f, ";")?;
                        for a in actions {
                            writeln!(f, "  {} {} as {} {{", a.side, a.algebra.as_str(), a.label.as_str())?;
                            for e in &a.entries {
                                match a.side {
                                    Side::Left => writeln!(f, "    e{}.g{} = {};", e.element, e.generator, e.value)?,
                                    Side::Right => writeln!(f, "    g{}.e{} = {};", e.generator, e.element, e.value)?,
                                }
                            }
                            writeln!(f, "  }}")?;
                        }
                        writeln!(f, "}}")
                    }
                }
            }
            Item::Morphism(m) => {
                writeln!(
                    f,
                    "morphism {} : {} -> {} {{",
                    m.name.as_str(),
                    m.source.as_str(),
                    m.target.as_str()
                )?;
                if let Some(sig) = &m.signature {
                    let entries: Vec<String> = sig
                        .iter()
                        .map(|e| match &e.via {
                            Some(v) => format!("{} -> {} via {}", e.source.as_str(), e.target.as_str(), v.as_str()),
                            None => format!("{} -> {}", e.source.as_str(), e.target.as_str()),
                        })
                        .collect();
                    writeln!(f, "  signature [{}];", entries.join(", "))?;
                }
                writeln!(f, "  matrix {};", rows(&m.matrix))?;
                writeln!(f, "}}")
            }
            Item::InnerProduct(p) => {
                writeln!(f, "innerproduct {} on {} {{", p.name.as_str(), p.module.as_str())?;
                if p.first.is_empty() {
                    writeln!(f, "  right {};", names(&p.second))?;
                } else if p.second.is_empty() {
                    writeln!(f, "  left {};", names(&p.first))?;
                } else {
                    writeln!(f, "  slots {} {};", names(&p.first), names(&p.second))?;
                }
                for (l, c) in &p.stars {
                    writeln!(f, "  star {} via {};", l.as_str(), c.as_str())?;
                }
                for v in &p.values {
                    writeln!(f, "  <g{}, g{}> = {};", v.first, v.second, v.value)?;
                }
                writeln!(f, "}}")
            }
            Item::Command(c) => writeln!(f, "{}", c.command),
        }
    }
}

impl Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::parser::parse;

    #[test]
    fn printing_is_stable() {
        let src = "base zmod 4;
            algebra D = dual_numbers;
            algebra Q = poly [1, 3];
            algebra T { rank 2; unit e0; mul e0*e0 = e0; mul e0*e1 = e1; mul e1*e0 = e1; mul e1*e1 = 0; base D via rows [[1,0],[0,1]]; }
            conjugation c on D contravariant { e0 -> e0; e1 -> [0, 3]; }
            conjugation i on D covariant identity;
            multimodule M = regular D as L R;
            multimodule F = free 2 left [D as L] right [Q as R];
            multimodule X { carrier rank 1 relations rows [[2]]; left D as L { e0.g0 = g0; } right D as R { g0.e1 = 0; } }
            involution s on M { L <-> R via i; star rows [[1,0],[0,1]]; }
            morphism f : M -> M { signature [L -> L, R -> R via i]; matrix rows [[1,0],[0,1]]; }
            innerproduct p on M { right [R]; star L via c; star R via c; <g0, g1> = [0, 1]; }
            check M; dual M I=[L]; hom M M; tensor M M contract [(R, L)]; trace M pairs [(L, R)];
            diff1 M M; diff1 M M select [L]; verify semiadjunction M J=[R]; iso M F; reflexive M; classify p;";
        let first = parse(src).unwrap().document;
        let text = first.to_string();
        let second = parse(&text).unwrap().document;
        assert_eq!(first, second);
        assert_eq!(text, second.to_string());
    }
}
