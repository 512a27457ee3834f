//! A small textual language for oriented 2-cobordisms, evaluated through the
//! TQFT functor.
//!
//! Grammar:
//!   expr   := term ('.' term)*
//!   term   := factor ('*' factor)*
//!   factor := atom | '(' expr ')'
//!   atom   := 'W(' int ';' int '->' int ')' | 'id' | 'id^' uint
//!
//! `.` is composition applied left-to-right (the leftmost cobordism acts
//! first), `*` is disjoint union; `.` binds looser than `*`. Because of the
//! left-to-right convention, matrices multiply in reversed order.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_basis, Multipartition};
use crate::rational::Rational;
use crate::tqft::{matrix_element, multi_indices, MatrixElementQuery, Report};
use crate::vi::TheoryParams;

/// Per-node boundary-circle budget for full-matrix evaluation.
pub const MAX_BOUNDARY_CIRCLES: u32 = 4;
/// Theory-size budget for full-matrix evaluation.
pub const MAX_THEORY_N: u32 = 5;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CobordismExpr {
    /// W(g; s -> t): the connected genus-g cobordism with s inputs, t outputs.
    Atom { genus: u32, inputs: u32, outputs: u32 },
    /// id^n: n parallel cylinders.
    Identity { circles: u32 },
    /// lhs . rhs: lhs acts first.
    Compose(Box<CobordismExpr>, Box<CobordismExpr>),
    /// lhs * rhs: disjoint union.
    Tensor(Box<CobordismExpr>, Box<CobordismExpr>),
}

impl fmt::Display for CobordismExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CobordismExpr::Atom {
                genus,
                inputs,
                outputs,
            } => write!(f, "W({genus};{inputs}->{outputs})"),
            CobordismExpr::Identity { circles } => {
                if *circles == 1 {
                    write!(f, "id")
                } else {
                    write!(f, "id^{circles}")
                }
            }
            CobordismExpr::Compose(a, b) => {
                write!(f, "{a} . ")?;
                // '.' is left-associative; a right-nested compose needs parens.
                if matches!(**b, CobordismExpr::Compose(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            CobordismExpr::Tensor(a, b) => {
                if matches!(**a, CobordismExpr::Compose(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " * ")?;
                if matches!(**b, CobordismExpr::Compose(..) | CobordismExpr::Tensor(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

/// Parse the concrete syntax; errors carry the byte offset.
pub fn parse(text: &str) -> Result<CobordismExpr> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected {:?}", b as char)))
        }
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            return Err(Error::parse(
                start,
                "negative genus or boundary counts are not allowed",
            ));
        }
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::parse(start, "expected an unsigned integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "integer out of range"))
    }

    fn expr(&mut self) -> Result<CobordismExpr> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'.') {
                self.pos += 1;
                self.skip_ws();
                acc = CobordismExpr::Compose(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<CobordismExpr> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                acc = CobordismExpr::Tensor(Box::new(acc), Box::new(self.factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<CobordismExpr> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'W') => {
                self.pos += 1;
                self.expect(b'(')?;
                self.skip_ws();
                let genus = self.uint()?;
                self.skip_ws();
                self.expect(b';')?;
                self.skip_ws();
                let inputs = self.uint()?;
                self.skip_ws();
                self.expect(b'-')?;
                self.expect(b'>')?;
                self.skip_ws();
                let outputs = self.uint()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(CobordismExpr::Atom {
                    genus,
                    inputs,
                    outputs,
                })
            }
            Some(b'i') => {
                if self.bytes[self.pos..].starts_with(b"id") {
                    self.pos += 2;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let circles = self.uint()?;
                        Ok(CobordismExpr::Identity { circles })
                    } else {
                        Ok(CobordismExpr::Identity { circles: 1 })
                    }
                } else {
                    Err(Error::parse(self.pos, "expected 'id'"))
                }
            }
            _ => Err(Error::parse(
                self.pos,
                "expected 'W(g;s->t)', 'id' or '('",
            )),
        }
    }
}

/// Total input/output circle counts, or the first ill-matched composition.
pub fn boundary_type(e: &CobordismExpr) -> Result<(u32, u32)> {
    match e {
        CobordismExpr::Atom {
            inputs, outputs, ..
        } => Ok((*inputs, *outputs)),
        CobordismExpr::Identity { circles } => Ok((*circles, *circles)),
        CobordismExpr::Compose(a, b) => {
            let (sa, ta) = boundary_type(a)?;
            let (sb, tb) = boundary_type(b)?;
            if ta != sb {
                return Err(Error::BoundaryMismatch {
                    left_outputs: ta,
                    right_inputs: sb,
                });
            }
            Ok((sa, tb))
        }
        CobordismExpr::Tensor(a, b) => {
            let (sa, ta) = boundary_type(a)?;
            let (sb, tb) = boundary_type(b)?;
            Ok((sa + sb, ta + tb))
        }
    }
}

/// A dense matrix over the rationals in the fixed tensor-power basis order
/// (leftmost circle most significant).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvalMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Rational>>,
}

impl EvalMatrix {
    pub fn identity(n: usize) -> EvalMatrix {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        EvalMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    /// self · other.
    pub fn mul(&self, other: &EvalMatrix) -> Result<EvalMatrix> {
        if self.cols != other.rows {
            return Err(Error::internal("matrix shape mismatch in composition"));
        }
        let entries = (0..self.rows)
            .map(|i| {
                (0..other.cols)
                    .map(|j| {
                        (0..self.cols)
                            .map(|p| &self.entries[i][p] * &other.entries[p][j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Ok(EvalMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Kronecker product, self's circles listed first.
    pub fn kronecker(&self, other: &EvalMatrix) -> EvalMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = vec![vec![Rational::zero(); cols]; rows];
        for ia in 0..self.rows {
            for ib in 0..other.rows {
                for ja in 0..self.cols {
                    for jb in 0..other.cols {
                        entries[ia * other.rows + ib][ja * other.cols + jb] =
                            &self.entries[ia][ja] * &other.entries[ib][jb];
                    }
                }
            }
        }
        EvalMatrix {
            rows,
            cols,
            entries,
        }
    }
}

fn guard_envelope(s: u32, t: u32, theory: TheoryParams) -> Result<()> {
    if theory.n() > MAX_THEORY_N {
        return Err(Error::EnvelopeExceeded(format!(
            "full-matrix evaluation supports r+k <= {MAX_THEORY_N}, got {}",
            theory.n()
        )));
    }
    if s + t > MAX_BOUNDARY_CIRCLES {
        return Err(Error::EnvelopeExceeded(format!(
            "node with {s}+{t} boundary circles exceeds the {MAX_BOUNDARY_CIRCLES}-circle budget"
        )));
    }
    Ok(())
}

/// The matrix of a single connected piece W(g; s -> t): rows indexed by
/// output multi-indices, columns by input multi-indices.
pub fn atom_matrix(genus: u32, s: u32, t: u32, theory: TheoryParams) -> Result<EvalMatrix> {
    guard_envelope(s, t, theory)?;
    let basis = enumerate_basis(theory.r, theory.k);
    let row_idx = multi_indices(basis.len(), t as usize);
    let col_idx = multi_indices(basis.len(), s as usize);
    let mut entries = Vec::with_capacity(row_idx.len());
    for row in &row_idx {
        let outputs = Multipartition::new(row.iter().map(|&i| basis[i].clone()).collect());
        let mut line = Vec::with_capacity(col_idx.len());
        for col in &col_idx {
            let inputs = Multipartition::new(col.iter().map(|&i| basis[i].clone()).collect());
            let v: BigInt = matrix_element(&MatrixElementQuery {
                genus,
                inputs,
                outputs: outputs.clone(),
                theory,
            })?;
            line.push(Rational::from(v));
        }
        entries.push(line);
    }
    Ok(EvalMatrix {
        rows: row_idx.len(),
        cols: col_idx.len(),
        entries,
    })
}

/// Evaluate a well-typed expression to its matrix: atoms map to matrices of
/// matrix elements, composition to matrix product (in reversed order, since
/// the left piece acts first), disjoint union to the Kronecker product, and
/// id^n to the identity on the n-fold tensor power.
pub fn evaluate(e: &CobordismExpr, theory: TheoryParams) -> Result<EvalMatrix> {
    let (s, t) = boundary_type(e)?;
    guard_envelope(s, t, theory)?;
    match e {
        CobordismExpr::Atom {
            genus,
            inputs,
            outputs,
        } => atom_matrix(*genus, *inputs, *outputs, theory),
        CobordismExpr::Identity { circles } => {
            let dim = enumerate_basis(theory.r, theory.k).len();
            Ok(EvalMatrix::identity(dim.pow(*circles)))
        }
        CobordismExpr::Compose(a, b) => {
            let ma = evaluate(a, theory)?;
            let mb = evaluate(b, theory)?;
            mb.mul(&ma)
        }
        CobordismExpr::Tensor(a, b) => {
            let ma = evaluate(a, theory)?;
            let mb = evaluate(b, theory)?;
            Ok(ma.kronecker(&mb))
        }
    }
}

/// Connectivity sketch: union-find over surface pieces with per-root Euler
/// characteristic, plus the component ids of the open boundary ports.
struct Sketch {
    parents: Vec<usize>,
    chi: Vec<i64>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl Sketch {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parents[x] != x {
            self.parents[x] = self.parents[self.parents[x]];
            x = self.parents[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parents[rb] = ra;
            self.chi[ra] += self.chi[rb];
        }
    }
}

fn sketch(e: &CobordismExpr, acc: &mut Sketch) -> Result<(Vec<usize>, Vec<usize>)> {
    match e {
        CobordismExpr::Atom {
            genus,
            inputs,
            outputs,
        } => {
            let id = acc.parents.len();
            acc.parents.push(id);
            acc.chi
                .push(2 - 2 * *genus as i64 - *inputs as i64 - *outputs as i64);
            Ok((vec![id; *inputs as usize], vec![id; *outputs as usize]))
        }
        CobordismExpr::Identity { circles } => {
            let mut ports = Vec::with_capacity(*circles as usize);
            for _ in 0..*circles {
                let id = acc.parents.len();
                acc.parents.push(id);
                acc.chi.push(0);
                ports.push(id);
            }
            Ok((ports.clone(), ports))
        }
        CobordismExpr::Compose(a, b) => {
            let (ia, oa) = sketch(a, acc)?;
            let (ib, ob) = sketch(b, acc)?;
            if oa.len() != ib.len() {
                return Err(Error::BoundaryMismatch {
                    left_outputs: oa.len() as u32,
                    right_inputs: ib.len() as u32,
                });
            }
            for (x, y) in oa.iter().zip(&ib) {
                acc.union(*x, *y);
            }
            Ok((ia, ob))
        }
        CobordismExpr::Tensor(a, b) => {
            let (mut ia, mut oa) = sketch(a, acc)?;
            let (ib, ob) = sketch(b, acc)?;
            ia.extend(ib);
            oa.extend(ob);
            Ok((ia, oa))
        }
    }
}

/// Normalize a connected expression to the single piece W(g; s -> t) it
/// represents, by Euler-characteristic bookkeeping (genus of a gluing is
/// g1 + g2 + t − 1 across t circles).
pub fn normalize_connected(e: &CobordismExpr) -> Result<(u32, u32, u32)> {
    let mut acc = Sketch {
        parents: Vec::new(),
        chi: Vec::new(),
        inputs: Vec::new(),
        outputs: Vec::new(),
    };
    let (ins, outs) = sketch(e, &mut acc)?;
    acc.inputs = ins;
    acc.outputs = outs;
    let piece_ids: Vec<usize> = (0..acc.parents.len()).collect();
    let mut roots: Vec<usize> = piece_ids.iter().map(|&i| acc.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() != 1 {
        let port_roots: Vec<usize> = acc
            .inputs
            .clone()
            .into_iter()
            .chain(acc.outputs.clone())
            .map(|p| acc.find(p))
            .collect();
        let closed = roots
            .iter()
            .filter(|r| !port_roots.contains(r))
            .count();
        return Err(Error::NotConnected(format!(
            "{} components ({} closed); split disjoint unions into tensor factors first",
            roots.len(),
            closed
        )));
    }
    let s = acc.inputs.len() as u32;
    let t = acc.outputs.len() as u32;
    let chi = acc.chi[roots[0]];
    let twice_genus = 2 - chi - s as i64 - t as i64;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::internal(format!(
            "Euler characteristic bookkeeping broke: chi = {chi}, s = {s}, t = {t}"
        )));
    }
    Ok(((twice_genus / 2) as u32, s, t))
}

/// Compare the functorial evaluation of an expression against the directly
/// computed matrix of its normalized connected piece. Top-level disjoint
/// unions are split into tensor factors and compared factor-wise; anything
/// else non-connected is rejected with a diagnostic.
pub fn direct_vs_composed(e: &CobordismExpr, theory: TheoryParams) -> Result<Report> {
    let mut factors = Vec::new();
    fn split_tensors<'a>(e: &'a CobordismExpr, out: &mut Vec<&'a CobordismExpr>) {
        if let CobordismExpr::Tensor(a, b) = e {
            split_tensors(a, out);
            split_tensors(b, out);
        } else {
            out.push(e);
        }
    }
    split_tensors(e, &mut factors);
    let mut report = Report::default();
    for factor in factors {
        let (g, s, t) = normalize_connected(factor)?;
        let direct = atom_matrix(g, s, t, theory)?;
        let composed = evaluate(factor, theory)?;
        let equal = direct == composed;
        let witness = if equal {
            format!("normalized to W({g};{s}->{t})")
        } else {
            let mut diff = String::new();
            'outer: for i in 0..direct.rows {
                for j in 0..direct.cols {
                    if direct.entries[i][j] != composed.entries[i][j] {
                        diff = format!(
                            "entry ({i},{j}): direct {} vs composed {}",
                            direct.entries[i][j], composed.entries[i][j]
                        );
                        break 'outer;
                    }
                }
            }
            diff
        };
        report.record(
            "direct-vs-composed",
            format!("{factor} ~ W({g};{s}->{t}): {witness}"),
            format!("{}x{} direct", direct.rows, direct.cols),
            format!("{}x{} composed", composed.rows, composed.cols),
            equal,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;
    use crate::vi::verlinde_closed;

    fn th(r: u32, k: u32) -> TheoryParams {
        TheoryParams::new(r, k).unwrap()
    }

    #[test]
    fn parse_atoms() {
        assert_eq!(
            parse("W(0;2->1)").unwrap(),
            CobordismExpr::Atom {
                genus: 0,
                inputs: 2,
                outputs: 1
            }
        );
        assert_eq!(parse("id").unwrap(), CobordismExpr::Identity { circles: 1 });
        assert_eq!(
            parse("id^3").unwrap(),
            CobordismExpr::Identity { circles: 3 }
        );
        let e = parse("W(0;0->1) * id . W(0;2->1)").unwrap();
        assert_eq!(boundary_type(&e).unwrap(), (1, 1));
    }

    #[test]
    fn parse_errors() {
        match parse("W(1;2->") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse("W(-1;0->0)").is_err());
        assert!(parse("id^").is_err());
        assert!(parse("W(1;1->1) foo").is_err());
    }

    #[test]
    fn boundary_types() {
        assert_eq!(
            boundary_type(&parse("W(2;3->1)").unwrap()).unwrap(),
            (3, 1)
        );
        assert_eq!(
            boundary_type(&parse("W(0;2->1) . W(0;1->0)").unwrap()).unwrap(),
            (2, 0)
        );
        assert!(matches!(
            boundary_type(&parse("W(0;2->1) . W(0;2->1)").unwrap()),
            Err(Error::BoundaryMismatch {
                left_outputs: 1,
                right_inputs: 2
            })
        ));
    }

    #[test]
    fn print_parse_round_trip() {
        for text in [
            "W(0;2->1)",
            "id",
            "id^2",
            "W(0;0->1) * id . W(0;2->1)",
            "(W(1;1->1) . W(0;1->2)) * id",
            "W(0;1->2) . (W(0;2->1) . W(1;1->1))",
        ] {
            let tree = parse(text).unwrap();
            let printed = tree.to_string();
            assert_eq!(parse(&printed).unwrap(), tree, "printed = {printed}");
        }
    }

    #[test]
    fn identity_evaluates_to_identity() {
        let m = evaluate(&parse("id").unwrap(), th(1, 1)).unwrap();
        assert_eq!(m, EvalMatrix::identity(2));
        let m = evaluate(&parse("id^2").unwrap(), th(1, 1)).unwrap();
        assert_eq!(m, EvalMatrix::identity(4));
    }

    #[test]
    fn unit_law() {
        // Cap into pants is the cylinder.
        for theory in [th(1, 1), th(2, 1)] {
            let m = evaluate(&parse("W(0;0->1) * id . W(0;2->1)").unwrap(), theory).unwrap();
            let dim = enumerate_basis(theory.r, theory.k).len();
            assert_eq!(m, EvalMatrix::identity(dim));
        }
    }

    #[test]
    fn closed_surfaces_from_caps() {
        for (g1, g2, r, k) in [(1u32, 1u32, 2u32, 1u32), (0, 2, 1, 2)] {
            let text = format!("W({g1};0->1) . W({g2};1->0)");
            let m = evaluate(&parse(&text).unwrap(), th(r, k)).unwrap();
            assert_eq!(m.rows, 1);
            assert_eq!(m.cols, 1);
            assert_eq!(
                m.entries[0][0],
                Rational::from(verlinde_closed(g1 + g2, r, k).unwrap())
            );
        }
    }

    #[test]
    fn functoriality_on_samples() {
        let theory = th(1, 2);
        for (a_txt, b_txt) in [
            ("W(0;1->2)", "W(0;2->1)"),
            ("W(1;1->1)", "W(1;1->1)"),
            ("W(0;0->2)", "W(1;2->1)"),
        ] {
            let a = parse(a_txt).unwrap();
            let b = parse(b_txt).unwrap();
            let chained = CobordismExpr::Compose(Box::new(a.clone()), Box::new(b.clone()));
            let ma = evaluate(&a, theory).unwrap();
            let mb = evaluate(&b, theory).unwrap();
            assert_eq!(
                evaluate(&chained, theory).unwrap(),
                mb.mul(&ma).unwrap(),
                "{a_txt} . {b_txt}"
            );
        }
    }

    #[test]
    fn tensor_compose_interchange() {
        let theory = th(1, 1);
        let a = parse("W(0;1->2)").unwrap();
        let b = parse("W(1;1->1)").unwrap();
        let c = parse("W(0;2->1)").unwrap();
        let d = parse("W(0;1->1)").unwrap();
        let lhs = evaluate(
            &parse("(W(0;1->2) * W(1;1->1)) . (W(0;2->1) * W(0;1->1))").unwrap(),
            theory,
        )
        .unwrap();
        let ac = evaluate(
            &CobordismExpr::Compose(Box::new(a), Box::new(c)),
            theory,
        )
        .unwrap();
        let bd = evaluate(
            &CobordismExpr::Compose(Box::new(b), Box::new(d)),
            theory,
        )
        .unwrap();
        assert_eq!(lhs, ac.kronecker(&bd));
    }

    #[test]
    fn normalization_by_euler_characteristic() {
        // Handle = pants after copants.
        assert_eq!(
            normalize_connected(&parse("W(0;1->2) . W(0;2->1)").unwrap()).unwrap(),
            (1, 1, 1)
        );
        // Two tori glued across one circle.
        assert_eq!(
            normalize_connected(&parse("W(1;1->1) . W(1;1->1)").unwrap()).unwrap(),
            (2, 1, 1)
        );
        // The cylinder itself.
        assert_eq!(
            normalize_connected(&parse("id . id").unwrap()).unwrap(),
            (0, 1, 1)
        );
        // A closed surface.
        assert_eq!(
            normalize_connected(&parse("W(0;0->1) . W(1;1->0)").unwrap()).unwrap(),
            (1, 0, 0)
        );
        // Disjoint pieces that are never glued are rejected.
        assert!(matches!(
            normalize_connected(&parse("W(1;1->1) * W(0;1->1)").unwrap()),
            Err(Error::NotConnected(_))
        ));
    }

    #[test]
    fn direct_vs_composed_identities() {
        let theory = th(1, 1);
        for text in [
            "W(1;1->1) . W(1;1->1)",
            "W(0;1->2) . W(0;2->1)",
            "id . id",
            // Disjoint unions normalize factor-wise.
            "(W(0;1->2) . W(0;2->1)) * id",
        ] {
            let rep = direct_vs_composed(&parse(text).unwrap(), theory).unwrap();
            assert!(rep.passed(), "{text}: {:?}", rep.entries);
        }
        // The glued pair-of-tori equals the direct genus-2 piece, whose
        // closed invariant we know.
        let rep = direct_vs_composed(&parse("W(1;0->1) . W(1;1->0)").unwrap(), th(2, 1)).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn envelope_guards() {
        assert!(matches!(
            evaluate(&parse("W(0;3->2)").unwrap(), th(1, 1)),
            Err(Error::EnvelopeExceeded(_))
        ));
        assert!(matches!(
            evaluate(&parse("id").unwrap(), th(3, 3)),
            Err(Error::EnvelopeExceeded(_))
        ));
        // Single-entry queries remain available beyond the envelope.
        let v = matrix_element(&MatrixElementQuery {
            genus: 1,
            inputs: Multipartition::empty(),
            outputs: Multipartition::empty(),
            theory: th(3, 3),
        })
        .unwrap();
        assert_eq!(Rational::from(v), rat_int(20));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_expr() -> impl Strategy<Value = CobordismExpr> {
            let leaf = prop_oneof![
                (0u32..3, 0u32..3, 0u32..3).prop_map(|(genus, inputs, outputs)| {
                    CobordismExpr::Atom {
                        genus,
                        inputs,
                        outputs,
                    }
                }),
                (1u32..4).prop_map(|circles| CobordismExpr::Identity { circles }),
            ];
            leaf.prop_recursive(4, 24, 2, |inner| {
                prop_oneof![
                    (inner.clone(), inner.clone())
                        .prop_map(|(a, b)| CobordismExpr::Compose(Box::new(a), Box::new(b))),
                    (inner.clone(), inner)
                        .prop_map(|(a, b)| CobordismExpr::Tensor(Box::new(a), Box::new(b))),
                ]
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn print_then_parse_is_identity(e in arb_expr()) {
                // Not all random trees are well-typed, but all print and
                // reparse to the identical tree.
                let printed = e.to_string();
                prop_assert_eq!(parse(&printed).unwrap(), e);
            }
        }
    }
}
