//! Planar open book decompositions: disk-with-punctures pages, Dehn twist
//! monodromy, and the (de)stabilization moves that carry a knot on a page.

use std::collections::BTreeSet;

use crate::kirby::{check_conditions, FramedLinkDiagram, Role, UnknottingResult};
use crate::{Error, Result};

/// A curve on the planar page, recorded by the set of punctures it encloses
/// and a nesting rank that separates parallel copies of the same subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageCurve {
    pub punctures: Vec<usize>,
    pub rank: usize,
}

impl PageCurve {
    pub fn new(mut punctures: Vec<usize>, rank: usize) -> PageCurve {
        punctures.sort_unstable();
        punctures.dedup();
        PageCurve { punctures, rank }
    }
}

/// One Dehn twist of the monodromy: +1 is right handed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twist {
    pub sign: i64,
    pub curve: PageCurve,
}

/// A knot carried on the page, as the curve it traces around the punctures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedKnot {
    pub id: usize,
    pub curve: PageCurve,
}

/// An open book with page a genus-0 surface: a disk bounded by the outer
/// binding, punctured once per inner binding. Monodromy twists compose left
/// to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarOpenBook {
    pub genus: usize,
    /// Outer boundary binding (the unknotted link image on pipeline books).
    pub outer: usize,
    /// Inner bindings in creation order, one puncture each.
    pub punctures: Vec<usize>,
    pub monodromy: Vec<Twist>,
    pub knots: Vec<MarkedKnot>,
    /// Set once any negative book stabilization has been performed; the
    /// supported contact structure is then no longer the original one.
    pub changed_xi: bool,
}

impl PlanarOpenBook {
    /// The standard disk open book of S³: one binding, empty monodromy.
    pub fn trivial(outer: usize) -> PlanarOpenBook {
        PlanarOpenBook {
            genus: 0,
            outer,
            punctures: Vec::new(),
            monodromy: Vec::new(),
            knots: Vec::new(),
            changed_xi: false,
        }
    }

    pub fn binding_count(&self) -> usize {
        1 + self.punctures.len()
    }

    fn next_rank(&self, punctures: &[usize]) -> usize {
        self.monodromy
            .iter()
            .filter(|t| t.curve.punctures == punctures)
            .count()
    }

    fn fresh_id(&self) -> usize {
        self.punctures
            .iter()
            .chain(std::iter::once(&self.outer))
            .chain(self.knots.iter().map(|k| &k.id))
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn render(&self) -> String {
        let ids: Vec<String> = self.punctures.iter().map(|p| p.to_string()).collect();
        let mut out = format!("page genus={} punctures=[{}]\n", self.genus, ids.join(" "));
        out.push_str(&format!("outer {}\n", self.outer));
        for t in &self.monodromy {
            out.push_str(&format!(
                "twist {} {{{}}} {}\n",
                fmt_sign(t.sign),
                fmt_ids(&t.curve.punctures),
                t.curve.rank
            ));
        }
        for k in &self.knots {
            out.push_str(&format!(
                "knot {} {{{}}} {}\n",
                k.id,
                fmt_ids(&k.curve.punctures),
                k.curve.rank
            ));
        }
        if self.changed_xi {
            out.push_str("changed-xi\n");
        }
        out
    }

    pub fn parse(text: &str) -> Result<PlanarOpenBook> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty open book text".into()))?;
        let rest = header
            .strip_prefix("page genus=")
            .ok_or_else(|| Error::Parse(format!("bad page header '{header}'")))?;
        let (genus_tok, punct_tok) = rest
            .split_once(" punctures=[")
            .ok_or_else(|| Error::Parse(format!("bad page header '{header}'")))?;
        let genus: usize = genus_tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad genus '{genus_tok}'")))?;
        let punct_tok = punct_tok
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("bad page header '{header}'")))?;
        let punctures = parse_ids(punct_tok)?;
        let mut book = PlanarOpenBook {
            genus,
            outer: 0,
            punctures,
            monodromy: Vec::new(),
            knots: Vec::new(),
            changed_xi: false,
        };
        for line in lines {
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("outer") => {
                    let id = toks
                        .next()
                        .ok_or_else(|| Error::Parse(format!("bad outer line '{line}'")))?;
                    book.outer = parse_id(id)?;
                }
                Some("twist") => {
                    let tok = toks
                        .next()
                        .ok_or_else(|| Error::Parse(format!("bad twist line '{line}'")))?;
                    let sign = parse_sign(tok)?;
                    let curve = parse_curve(line)?;
                    book.monodromy.push(Twist { sign, curve });
                }
                Some("knot") => {
                    let tok = toks
                        .next()
                        .ok_or_else(|| Error::Parse(format!("bad knot line '{line}'")))?;
                    let id = parse_id(tok)?;
                    let curve = parse_curve(line)?;
                    book.knots.push(MarkedKnot { id, curve });
                }
                Some("changed-xi") => book.changed_xi = true,
                _ => return Err(Error::Parse(format!("bad open book line '{line}'"))),
            }
        }
        Ok(book)
    }
}

fn fmt_sign(s: i64) -> &'static str {
    if s >= 0 {
        "+1"
    } else {
        "-1"
    }
}

fn fmt_ids(ids: &[usize]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_id(t: &str) -> Result<usize> {
    t.parse().map_err(|_| Error::Parse(format!("bad id '{t}'")))
}

fn parse_ids(t: &str) -> Result<Vec<usize>> {
    t.split_whitespace().map(parse_id).collect()
}

fn parse_sign(t: &str) -> Result<i64> {
    match t {
        "+1" | "+" | "1" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(Error::Parse(format!("bad twist sign '{t}'"))),
    }
}

/// Extracts "{ids} rank" from the tail of a twist or knot line.
fn parse_curve(line: &str) -> Result<PageCurve> {
    let open = line
        .find('{')
        .ok_or_else(|| Error::Parse(format!("missing puncture set in '{line}'")))?;
    let close = line
        .find('}')
        .filter(|&c| c > open)
        .ok_or_else(|| Error::Parse(format!("missing puncture set in '{line}'")))?;
    let ids = parse_ids(&line[open + 1..close])?;
    let rank_tok = line[close + 1..].trim();
    let rank: usize = rank_tok
        .parse()
        .map_err(|_| Error::Parse(format!("bad nesting rank '{rank_tok}'")))?;
    Ok(PageCurve::new(ids, rank))
}

/// Reads a compiled surgery diagram as a planar open book: the unknotted
/// image is the outer binding, the 0-framed unknots are the punctures, and
/// every ±1-framed curve contributes one Dehn twist of the opposite sign
/// along its enclosure. Split ambient ±1-curves enter through one book
/// stabilization each. The result is certified by reconstructing a surgery
/// presentation from the book and comparing homology.
pub fn from_surgery(r: &UnknottingResult) -> Result<PlanarOpenBook> {
    let report = check_conditions(r);
    if !report.all_pass() {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Error::OpenBook(format!(
            "surgery diagram violates: {}",
            failed.join("; ")
        )));
    }
    let knots = r.knot_ids();
    if knots.len() != 1 {
        return Err(Error::OpenBook(format!(
            "need a single unknotted image to bound the page, got {} components; band the link first",
            knots.len()
        )));
    }
    let outer = knots[0];
    let d = &r.diagram;
    let mut book = PlanarOpenBook::trivial(outer);
    for c in d.components() {
        if c.role == Role::Binding {
            book.punctures.push(c.id);
        }
    }
    for c in d.components() {
        if c.role == Role::Twist {
            let enclosed: Vec<usize> = book
                .punctures
                .iter()
                .copied()
                .filter(|&u| d.linking(c.id, u) != 0)
                .collect();
            let rank = book.next_rank(&enclosed);
            book.monodromy.push(Twist {
                sign: -c.framing,
                curve: PageCurve::new(enclosed, rank),
            });
        }
    }
    // the knot runs around every puncture it links: all of them, by the
    // once-linking condition
    let knot_curve: Vec<usize> = book
        .punctures
        .iter()
        .copied()
        .filter(|&u| d.linking(outer, u) != 0)
        .collect();
    book.knots.push(MarkedKnot {
        id: outer,
        curve: PageCurve::new(knot_curve, 0),
    });
    // split ambient curves become page curves after one stabilization each
    for c in d.components() {
        if c.role == Role::Ambient {
            let sign = -c.framing;
            book = stabilize_book(&book, sign, (book.outer, book.outer))?;
        }
    }
    let rebuilt = to_surgery(&book)?;
    if rebuilt.homology() != d.homology() {
        return Err(Error::Certificate(
            "open book reconstruction changes the manifold homology".into(),
        ));
    }
    Ok(book)
}

/// Rebuilds a surgery presentation from the book over the trivial one: the
/// punctures become 0-framed unknots each linking the outer binding once,
/// and each twist becomes a curve of framing −sign around its punctures.
pub fn to_surgery(ob: &PlanarOpenBook) -> Result<FramedLinkDiagram> {
    if ob.genus != 0 {
        return Err(Error::OpenBook(format!("page has genus {}, expected 0", ob.genus)));
    }
    let mut d = FramedLinkDiagram::new();
    d.add_component(ob.outer, Role::Unknotted, 0)?;
    for &u in &ob.punctures {
        d.add_component(u, Role::Binding, 0)?;
        d.set_linking(ob.outer, u, 1)?;
    }
    let mut next = ob.fresh_id();
    for t in &ob.monodromy {
        d.add_component(next, Role::Twist, -t.sign)?;
        for &u in &t.curve.punctures {
            if d.component(u).is_none() {
                return Err(Error::OpenBook(format!("twist references unknown puncture {u}")));
            }
            d.set_linking(next, u, 1)?;
        }
        d.set_enclosure(next, t.curve.punctures.clone())?;
        next += 1;
    }
    Ok(d)
}

/// Structural report: genus, binding count, twist census, and any invariant
/// violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BookReport {
    pub genus: usize,
    pub bindings: usize,
    pub positive_twists: usize,
    pub negative_twists: usize,
    pub problems: Vec<String>,
}

impl BookReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "genus {}\nbindings {}\ntwists +{} -{}\n",
            self.genus, self.bindings, self.positive_twists, self.negative_twists
        );
        if self.problems.is_empty() {
            out.push_str("valid\n");
        } else {
            for p in &self.problems {
                out.push_str(&format!("INVALID {p}\n"));
            }
        }
        out
    }
}

pub fn validate(ob: &PlanarOpenBook) -> BookReport {
    let mut problems = Vec::new();
    if ob.genus != 0 {
        problems.push(format!("page genus {} in planar model", ob.genus));
    }
    let all: BTreeSet<usize> = ob.punctures.iter().copied().collect();
    if all.len() != ob.punctures.len() {
        problems.push("duplicate puncture ids".into());
    }
    if all.contains(&ob.outer) {
        problems.push("outer binding listed as a puncture".into());
    }
    for (k, t) in ob.monodromy.iter().enumerate() {
        if t.sign.abs() != 1 {
            problems.push(format!("twist {k} has sign {}", t.sign));
        }
        check_curve(&t.curve, &all, &format!("twist {k}"), true, &mut problems);
    }
    for knot in &ob.knots {
        check_curve(&knot.curve, &all, &format!("knot {}", knot.id), false, &mut problems);
    }
    BookReport {
        genus: ob.genus,
        bindings: ob.binding_count(),
        positive_twists: ob.monodromy.iter().filter(|t| t.sign > 0).count(),
        negative_twists: ob.monodromy.iter().filter(|t| t.sign < 0).count(),
        problems,
    }
}

fn check_curve(
    c: &PageCurve,
    all: &BTreeSet<usize>,
    what: &str,
    proper: bool,
    problems: &mut Vec<String>,
) {
    // twists around nothing are isotopically trivial; a knot curve enclosing
    // nothing is fine (the unknot on a disk page)
    if proper && c.punctures.is_empty() {
        problems.push(format!("{what} curve encloses no punctures"));
    }
    for &u in &c.punctures {
        if !all.contains(&u) {
            problems.push(format!("{what} curve references unknown puncture {u}"));
        }
    }
}

/// Attaches a 1-handle to the page and composes the monodromy with one
/// twist along the new handle's core circle. Both feet must sit on the same
/// boundary component, otherwise the handle would create genus. A negative
/// stabilization changes the supported contact structure.
pub fn stabilize_book(
    ob: &PlanarOpenBook,
    sign: i64,
    attach: (usize, usize),
) -> Result<PlanarOpenBook> {
    if sign.abs() != 1 {
        return Err(Error::OpenBook(format!("stabilization sign must be ±1, got {sign}")));
    }
    let (a, b) = attach;
    let on_boundary = |x: usize| x == ob.outer || ob.punctures.contains(&x);
    if !on_boundary(a) || !on_boundary(b) {
        return Err(Error::OpenBook(format!(
            "attachment feet ({a},{b}) must lie on page boundary components"
        )));
    }
    if a != b {
        return Err(Error::OpenBook(format!(
            "attaching a handle across boundary components {a} and {b} would create genus"
        )));
    }
    let mut out = ob.clone();
    let new_id = out.fresh_id();
    out.punctures.push(new_id);
    let rank = out.next_rank(std::slice::from_ref(&new_id));
    out.monodromy.push(Twist {
        sign,
        curve: PageCurve::new(vec![new_id], rank),
    });
    if sign < 0 {
        out.changed_xi = true;
    }
    Ok(out)
}

/// Stabilizes a marked knot on the page: one positive book stabilization,
/// then the knot is pushed over the new handle. Returns the book and the
/// (tb, rot) delta: (−1, +1) for a positive stabilization, (−1, −1) for a
/// negative one. Neither the contact structure nor the genus changes.
pub fn stabilize_knot_on_page(
    ob: &PlanarOpenBook,
    knot_id: usize,
    sign: i64,
) -> Result<(PlanarOpenBook, (i64, i64))> {
    let (book, new_id) = push_over_new_handle(ob, knot_id, 1)?;
    let _ = new_id;
    Ok((book, (-1, sign)))
}

/// Destabilizes a marked knot: one negative book stabilization and a push,
/// producing the curve whose stabilization of the given sign is the
/// original knot. Returns the (tb, rot) delta (+1, −sign). The negative
/// stabilization changes the supported contact structure.
pub fn destabilize_knot_on_page(
    ob: &PlanarOpenBook,
    knot_id: usize,
    sign: i64,
) -> Result<(PlanarOpenBook, (i64, i64))> {
    let (book, new_id) = push_over_new_handle(ob, knot_id, -1)?;
    let _ = new_id;
    Ok((book, (1, -sign)))
}

fn push_over_new_handle(
    ob: &PlanarOpenBook,
    knot_id: usize,
    book_sign: i64,
) -> Result<(PlanarOpenBook, usize)> {
    if !ob.knots.iter().any(|k| k.id == knot_id) {
        return Err(Error::OpenBook(format!("no knot {knot_id} marked on the page")));
    }
    let mut book = stabilize_book(ob, book_sign, (ob.outer, ob.outer))?;
    let new_id = *book.punctures.last().unwrap();
    let knot = book.knots.iter_mut().find(|k| k.id == knot_id).unwrap();
    let mut punctures = knot.curve.punctures.clone();
    punctures.push(new_id);
    knot.curve = PageCurve::new(punctures, knot.curve.rank);
    Ok((book, new_id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{comb, BraidWord};
    use crate::kirby::{band_connect, compile_unknotting, embed_in_manifold, positive_monodromy_compile};
    use crate::plat::{closure_to_plat, purify, shift};

    fn pipeline(closure: &str, strands: usize, positive: bool) -> UnknottingResult {
        let b = BraidWord::parse(closure, Some(strands)).unwrap();
        let plat = shift(&closure_to_plat(&b).unwrap()).unwrap();
        let (pure, _) = purify(&plat).unwrap();
        let word = comb(pure.braid()).unwrap();
        if positive {
            positive_monodromy_compile(&word, &pure).unwrap()
        } else {
            compile_unknotting(&word, &pure).unwrap()
        }
    }

    #[test]
    fn trivial_book_is_valid() {
        let book = PlanarOpenBook::trivial(0);
        let rep = validate(&book);
        assert!(rep.is_valid(), "{}", rep.render());
        assert_eq!(rep.bindings, 1);
        assert_eq!(to_surgery(&book).unwrap().homology(), Vec::<i64>::new());
    }

    #[test]
    fn trefoil_book_certifies() {
        let r = pipeline("1 1 1", 2, false);
        let book = from_surgery(&r).unwrap();
        let rep = validate(&book);
        assert!(rep.is_valid(), "{}", rep.render());
        // binding identity: outer plus one per 0-framed unknot
        let l0 = r
            .diagram
            .components()
            .iter()
            .filter(|c| c.role == Role::Binding)
            .count();
        assert_eq!(book.binding_count(), 1 + l0);
        assert_eq!(book.knots.len(), 1);
        assert_eq!(book.knots[0].curve.punctures, book.punctures);
    }

    #[test]
    fn positive_book_has_no_negative_twists() {
        let r = pipeline("-2 1 -2 1", 3, true);
        let book = from_surgery(&r).unwrap();
        let rep = validate(&book);
        assert!(rep.is_valid(), "{}", rep.render());
        assert_eq!(rep.negative_twists, 0);
        assert!(rep.positive_twists > 0);
        assert!(!book.changed_xi);
    }

    #[test]
    fn banded_link_gets_a_book() {
        let r = pipeline("1 1", 2, false);
        assert!(from_surgery(&r).is_err());
        let banded = band_connect(&r).unwrap();
        let book = from_surgery(&banded).unwrap();
        assert!(validate(&book).is_valid());
    }

    #[test]
    fn ambient_curves_stabilize_the_book() {
        let r = pipeline("1 1 1", 2, false);
        let base = from_surgery(&r).unwrap();

        let neg = from_surgery(&embed_in_manifold(&r, &[-1]).unwrap()).unwrap();
        assert_eq!(neg.binding_count(), base.binding_count() + 1);
        assert_eq!(neg.monodromy.len(), base.monodromy.len() + 1);
        assert_eq!(neg.monodromy.last().unwrap().sign, 1);
        assert!(!neg.changed_xi);

        let pos = from_surgery(&embed_in_manifold(&r, &[1]).unwrap()).unwrap();
        assert_eq!(pos.monodromy.last().unwrap().sign, -1);
        assert!(pos.changed_xi);
    }

    #[test]
    fn book_stabilization_adds_hopf_band() {
        let book = PlanarOpenBook::trivial(0);
        let stab = stabilize_book(&book, 1, (0, 0)).unwrap();
        assert_eq!(stab.binding_count(), 2);
        assert_eq!(stab.monodromy.len(), 1);
        assert_eq!(stab.monodromy[0].sign, 1);
        assert_eq!(to_surgery(&stab).unwrap().homology(), Vec::<i64>::new());
        assert!(!stab.changed_xi);

        let neg = stabilize_book(&book, -1, (0, 0)).unwrap();
        assert!(neg.changed_xi);
    }

    #[test]
    fn cross_boundary_handle_is_rejected() {
        let book = stabilize_book(&PlanarOpenBook::trivial(0), 1, (0, 0)).unwrap();
        let other = book.punctures[0];
        assert!(stabilize_book(&book, 1, (0, other)).is_err());
        assert!(stabilize_book(&book, 1, (99, 99)).is_err());
    }

    #[test]
    fn knot_stabilization_deltas() {
        let r = pipeline("1 1 1", 2, false);
        let book = from_surgery(&r).unwrap();
        let k = book.knots[0].id;

        let (sp, d) = stabilize_knot_on_page(&book, k, 1).unwrap();
        assert_eq!(d, (-1, 1));
        assert_eq!(sp.genus, 0);
        assert!(!sp.changed_xi);

        let (sm, d) = stabilize_knot_on_page(&book, k, -1).unwrap();
        assert_eq!(d, (-1, -1));
        assert!(!sm.changed_xi);

        let (dp, d) = destabilize_knot_on_page(&book, k, 1).unwrap();
        assert_eq!(d, (1, -1));
        assert!(dp.changed_xi);

        let (_, d) = destabilize_knot_on_page(&book, k, -1).unwrap();
        assert_eq!(d, (1, 1));

        // destabilize then stabilize with the same sign is the identity on
        // the (tb, rot) ledger
        let (dd, d1) = destabilize_knot_on_page(&book, k, 1).unwrap();
        let (_, d2) = stabilize_knot_on_page(&dd, k, 1).unwrap();
        assert_eq!((d1.0 + d2.0, d1.1 + d2.1), (0, 0));

        assert!(stabilize_knot_on_page(&book, 999, 1).is_err());
    }

    #[test]
    fn malformed_books_are_flagged() {
        let base = stabilize_book(&PlanarOpenBook::trivial(0), 1, (0, 0)).unwrap();

        // a twist covering every puncture is legitimate: the single-puncture
        // case is the Hopf band
        assert!(validate(&base).is_valid());

        let mut b = base.clone();
        b.monodromy.push(Twist { sign: 2, curve: PageCurve::new(vec![1], 1) });
        assert!(!validate(&b).is_valid());

        let mut b = base.clone();
        b.monodromy.push(Twist { sign: 1, curve: PageCurve::new(vec![], 0) });
        assert!(!validate(&b).is_valid());

        let mut b = base.clone();
        b.monodromy.push(Twist { sign: 1, curve: PageCurve::new(vec![99], 0) });
        assert!(!validate(&b).is_valid());

        let mut b = base;
        b.punctures.push(b.outer);
        assert!(!validate(&b).is_valid());
    }

    #[test]
    fn text_round_trip() {
        let r = pipeline("-2 1 -2 1", 3, false);
        let mut book = from_surgery(&r).unwrap();
        book = stabilize_book(&book, -1, (book.outer, book.outer)).unwrap();
        let text = book.render();
        let parsed = PlanarOpenBook::parse(&text).unwrap();
        assert_eq!(parsed, book);
        assert_eq!(parsed.render(), text);
    }

    #[test]
    fn parallel_twists_get_distinct_ranks() {
        let r = pipeline("1 1 1", 2, false);
        let book = from_surgery(&r).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for t in &book.monodromy {
            assert!(seen.insert((t.curve.punctures.clone(), t.curve.rank)));
        }
    }
}
