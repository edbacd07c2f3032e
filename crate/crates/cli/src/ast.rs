//! Syntax tree of a multimod document.
//!
//! Spans are carried for diagnostics but ignored by equality, so two trees
//! compare equal exactly when they describe the same document.

use std::fmt;

/// A 1-based source position.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// An identifier together with where it was written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

impl Name {
    pub fn new(text: &str) -> Self {
        Name {
            text: text.into(),
            span: Span::default(),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// A vector literal: explicit coordinates, a basis element such as `e1` or `g0`, or `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Vector {
    Coords(Vec<u64>),
    Basis(char, usize),
    Zero,
}

/// Rows of a matrix literal.
pub type Rows = Vec<Vec<u64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Base(BaseDecl),
    Algebra(AlgebraDecl),
    Conjugation(ConjugationDecl),
    Involution(InvolutionDecl),
    Multimodule(MultimoduleDecl),
    Morphism(MorphismDecl),
    InnerProduct(InnerProductDecl),
    Command(CommandDecl),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseDecl {
    pub modulus: u64,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDecl {
    pub name: Name,
    pub body: AlgebraBody,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraBody {
    Table {
        rank: usize,
        unit: Vector,
        products: Vec<Product>,
        base: Option<BaseClause>,
    },
    Builtin(Builtin),
}

/// `mul e<left>*e<right> = value;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub left: usize,
    pub right: usize,
    pub value: Vector,
}

/// `base <ring> via rows [...];`, the embedding of a base ring into the centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseClause {
    pub ring: Name,
    pub map: Rows,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Scalars,
    Dual,
    Triangular,
    Matrices,
    Split,
    SquareZero(usize),
    /// `poly [c0, ..., c(d-1)]`: the quotient by `x^d = c0 + c1 x + ...`.
    Poly(Vec<u64>),
}

impl Builtin {
    pub fn keyword(&self) -> &'static str {
        match self {
            Builtin::Scalars => "scalars",
            Builtin::Dual => "dual_numbers",
            Builtin::Triangular => "upper_triangular",
            Builtin::Matrices => "matrices2",
            Builtin::Split => "split_pair",
            Builtin::SquareZero(_) => "square_zero",
            Builtin::Poly(_) => "poly",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationDecl {
    pub name: Name,
    pub algebra: Name,
    pub variance: Variance,
    /// `None` for the identity map.
    pub images: Option<Vec<(usize, Vector)>>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionDecl {
    pub name: Name,
    pub module: Name,
    pub pairs: Vec<InvolutionPair>,
    pub star: Rows,
    pub span: Span,
}

/// `<label> <-> <partner> via <conjugation>;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionPair {
    pub label: Name,
    pub partner: Name,
    pub via: Name,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultimoduleDecl {
    pub name: Name,
    pub body: MultimoduleBody,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultimoduleBody {
    Explicit {
        rank: usize,
        relations: Rows,
        actions: Vec<ActionDecl>,
    },
    Regular {
        algebra: Name,
        left: Name,
        right: Name,
    },
    LeftRegular {
        algebra: Name,
        label: Name,
    },
    RightRegular {
        algebra: Name,
        label: Name,
    },
    Free {
        points: usize,
        lefts: Vec<(Name, Name)>,
        rights: Vec<(Name, Name)>,
    },
}

/// `left <algebra> as <label> { e<i>.g<j> = value; }`, or the right-hand form `g<j>.e<i>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub side: Side,
    pub algebra: Name,
    pub label: Name,
    pub entries: Vec<ActionEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionEntry {
    pub element: usize,
    pub generator: usize,
    pub value: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: Name,
    pub source: Name,
    pub target: Name,
    /// `None` sends every label to the label of the same name.
    pub signature: Option<Vec<SignatureEntry>>,
    pub matrix: Rows,
    pub span: Span,
}

/// `<source> -> <target> [via <conjugation>]`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureEntry {
    pub source: Name,
    pub target: Name,
    pub via: Option<Name>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProductDecl {
    pub name: Name,
    pub module: Name,
    pub first: Vec<Name>,
    pub second: Vec<Name>,
    pub stars: Vec<(Name, Name)>,
    pub values: Vec<FormEntry>,
    pub span: Span,
}

/// `<g<i>, g<j>> = value;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormEntry {
    pub first: usize,
    pub second: usize,
    pub value: Vector,
}

/// Left labels `I` and right labels `J` of a dual.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Selection {
    pub left: Vec<Name>,
    pub right: Vec<Name>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandDecl {
    pub command: Command,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Check(Name),
    Dual(Name, Selection),
    Hom(Name, Name),
    Tensor(Name, Name, Vec<(Name, Name)>),
    Trace(Name, Vec<(Name, Name)>),
    Diff1(Name, Name, Option<Vec<Name>>),
    Semiadjunction(Name, Selection),
    Iso(Name, Name),
    Reflexive(Name, Selection),
    Classify(Name),
}

impl Command {
    pub fn keyword(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Dual(..) => "dual",
            Command::Hom(..) => "hom",
            Command::Tensor(..) => "tensor",
            Command::Trace(..) => "trace",
            Command::Diff1(..) => "diff1",
            Command::Semiadjunction(..) => "verify semiadjunction",
            Command::Iso(..) => "iso",
            Command::Reflexive(..) => "reflexive",
            Command::Classify(_) => "classify",
        }
    }
}
