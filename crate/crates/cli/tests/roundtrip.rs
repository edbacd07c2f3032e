use multimod::ast::*;
use multimod::parser::parse;
use proptest::collection::vec;
use proptest::prelude::*;

fn name() -> impl Strategy<Value = Name> {
    "[A-Z][A-Za-z0-9]{0,3}'?".prop_map(|s| Name::new(&s))
}

fn names() -> impl Strategy<Value = Vec<Name>> {
    vec(name(), 0..3)
}

fn name_pairs() -> impl Strategy<Value = Vec<(Name, Name)>> {
    vec((name(), name()), 0..3)
}

fn residues(n: u64, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u64>> {
    vec(0..n, len)
}

fn vector(n: u64, prefix: char) -> impl Strategy<Value = Vector> {
    prop_oneof![
        residues(n, 0..4).prop_map(Vector::Coords),
        (0usize..12).prop_map(move |k| Vector::Basis(prefix, k)),
        Just(Vector::Zero),
    ]
}

fn rows(n: u64) -> impl Strategy<Value = Rows> {
    vec(residues(n, 0..4), 0..3)
}

fn variance() -> impl Strategy<Value = Variance> {
    prop_oneof![Just(Variance::Covariant), Just(Variance::Contravariant)]
}

fn selection() -> impl Strategy<Value = Selection> {
    (names(), names()).prop_map(|(left, right)| Selection { left, right })
}

fn algebra(n: u64) -> impl Strategy<Value = Item> {
    let builtin = prop_oneof![
        Just(Builtin::Scalars),
        Just(Builtin::Dual),
        Just(Builtin::Triangular),
        Just(Builtin::Matrices),
        Just(Builtin::Split),
        (0usize..5).prop_map(Builtin::SquareZero),
        residues(n, 0..4).prop_map(Builtin::Poly),
    ];
    let product = (0usize..4, 0usize..4, vector(n, 'e')).prop_map(|(left, right, value)| Product { left, right, value });
    let table = (
        0usize..5,
        vector(n, 'e'),
        vec(product, 0..4),
        proptest::option::of((name(), rows(n)).prop_map(|(ring, map)| BaseClause { ring, map })),
    )
        .prop_map(|(rank, unit, products, base)| AlgebraBody::Table {
            rank,
            unit,
            products,
            base,
        });
    (name(), prop_oneof![builtin.prop_map(AlgebraBody::Builtin), table]).prop_map(|(name, body)| {
        Item::Algebra(AlgebraDecl {
            name,
            body,
            span: Span::default(),
        })
    })
}

fn conjugation(n: u64) -> impl Strategy<Value = Item> {
    (
        name(),
        name(),
        variance(),
        proptest::option::of(vec((0usize..4, vector(n, 'e')), 0..3)),
    )
        .prop_map(|(name, algebra, variance, images)| {
            Item::Conjugation(ConjugationDecl {
                name,
                algebra,
                variance,
                images,
                span: Span::default(),
            })
        })
}

fn involution(n: u64) -> impl Strategy<Value = Item> {
    let pair = (name(), name(), name()).prop_map(|(label, partner, via)| InvolutionPair { label, partner, via });
    (name(), name(), vec(pair, 0..3), rows(n)).prop_map(|(name, module, pairs, star)| {
        Item::Involution(InvolutionDecl {
            name,
            module,
            pairs,
            star,
            span: Span::default(),
        })
    })
}

fn multimodule(n: u64) -> impl Strategy<Value = Item> {
    let entry = (0usize..4, 0usize..4, vector(n, 'g')).prop_map(|(element, generator, value)| ActionEntry {
        element,
        generator,
        value,
    });
    let side = prop_oneof![Just(Side::Left), Just(Side::Right)];
    let action = (side, name(), name(), vec(entry, 0..4)).prop_map(|(side, algebra, label, entries)| ActionDecl {
        side,
        algebra,
        label,
        entries,
    });
    let body = prop_oneof![
        (0usize..5, rows(n), vec(action, 0..3)).prop_map(|(rank, relations, actions)| MultimoduleBody::Explicit {
            rank,
            relations,
            actions
        }),
        (name(), name(), name()).prop_map(|(algebra, left, right)| MultimoduleBody::Regular { algebra, left, right }),
        (name(), name()).prop_map(|(algebra, label)| MultimoduleBody::LeftRegular { algebra, label }),
        (name(), name()).prop_map(|(algebra, label)| MultimoduleBody::RightRegular { algebra, label }),
        (0usize..4, name_pairs(), name_pairs()).prop_map(|(points, lefts, rights)| MultimoduleBody::Free {
            points,
            lefts,
            rights
        }),
    ];
    (name(), body).prop_map(|(name, body)| {
        Item::Multimodule(MultimoduleDecl {
            name,
            body,
            span: Span::default(),
        })
    })
}

fn morphism(n: u64) -> impl Strategy<Value = Item> {
    let entry = (name(), name(), proptest::option::of(name())).prop_map(|(source, target, via)| SignatureEntry {
        source,
        target,
        via,
    });
    (name(), name(), name(), proptest::option::of(vec(entry, 0..3)), rows(n)).prop_map(
        |(name, source, target, signature, matrix)| {
            Item::Morphism(MorphismDecl {
                name,
                source,
                target,
                signature,
                matrix,
                span: Span::default(),
            })
        },
    )
}

fn inner_product(n: u64) -> impl Strategy<Value = Item> {
    let value = (0usize..4, 0usize..4, vector(n, 't')).prop_map(|(first, second, value)| FormEntry {
        first,
        second,
        value,
    });
    (name(), name(), names(), names(), name_pairs(), vec(value, 0..4)).prop_map(
        |(name, module, first, second, stars, values)| {
            Item::InnerProduct(InnerProductDecl {
                name,
                module,
                first,
                second,
                stars,
                values,
                span: Span::default(),
            })
        },
    )
}

fn command() -> impl Strategy<Value = Item> {
    let c = prop_oneof![
        name().prop_map(Command::Check),
        (name(), selection()).prop_map(|(m, s)| Command::Dual(m, s)),
        (name(), name()).prop_map(|(a, b)| Command::Hom(a, b)),
        (name(), name(), name_pairs()).prop_map(|(a, b, p)| Command::Tensor(a, b, p)),
        (name(), name_pairs()).prop_map(|(m, p)| Command::Trace(m, p)),
        (name(), name(), proptest::option::of(names())).prop_map(|(a, b, s)| Command::Diff1(a, b, s)),
        (name(), selection()).prop_map(|(m, s)| Command::Semiadjunction(m, s)),
        (name(), name()).prop_map(|(a, b)| Command::Iso(a, b)),
        (name(), selection()).prop_map(|(m, s)| Command::Reflexive(m, s)),
        name().prop_map(Command::Classify),
    ];
    c.prop_map(|command| {
        Item::Command(CommandDecl {
            command,
            span: Span::default(),
        })
    })
}

fn document() -> impl Strategy<Value = Document> {
    (2u64..40).prop_flat_map(|n| {
        let item = prop_oneof![
            algebra(n),
            conjugation(n),
            involution(n),
            multimodule(n),
            morphism(n),
            inner_product(n),
            command(),
        ];
        vec(item, 0..8).prop_map(move |rest| {
            let mut items = vec![Item::Base(BaseDecl {
                modulus: n,
                span: Span::default(),
            })];
            items.extend(rest);
            Document { items }
        })
    })
}

/// Relation rows must be nonempty to be written in the source language.
fn printable(doc: &Document) -> bool {
    doc.items.iter().all(|i| match i {
        Item::Multimodule(MultimoduleDecl {
            body: MultimoduleBody::Explicit { relations, .. },
            ..
        }) => relations.iter().all(|r| !r.is_empty()) || relations.is_empty(),
        _ => true,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_the_identity(doc in document()) {
        prop_assume!(printable(&doc));
        let text = doc.to_string();
        let parsed = parse(&text).map_err(|d| TestCaseError::fail(format!("{d:?}\n{text}")))?;
        prop_assert!(parsed.warnings.is_empty());
        prop_assert_eq!(&parsed.document, &doc);
    }

    #[test]
    fn parse_print_parse_is_stable(doc in document()) {
        prop_assume!(printable(&doc));
        let once = parse(&doc.to_string()).unwrap().document;
        let twice = parse(&once.to_string()).unwrap().document;
        prop_assert_eq!(once.to_string(), twice.to_string());
        prop_assert_eq!(once, twice);
    }
}
