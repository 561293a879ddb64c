//! Legendrian bookkeeping: classical invariants, stabilization planning,
//! rational contact surgery expansion, and the d3 invariant.
//!
//! Everything here is exact arithmetic on an abstract ledger. The geometric
//! side (where the stabilizations actually happen) lives in [`crate::openbook`];
//! `surgery_on_page` ties the two together.

use crate::openbook::{stabilize_knot_on_page, MarkedKnot, PageCurve, PlanarOpenBook, Twist};
use crate::{Error, Result};
use num_rational::Rational64;
use num_traits::Signed;

/// Classical invariants of a Legendrian knot, plus ambient flags picked up
/// along the way. For a genuine Legendrian knot tb + rot is odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendrianLedger {
    pub knot: usize,
    pub tb: i64,
    pub rot: i64,
    /// Set when a destabilization forced an overtwisted ambient structure.
    pub overtwisted: bool,
    /// Number of moves so far that changed the supported contact structure.
    pub changed_xi: usize,
}

impl LegendrianLedger {
    pub fn new(knot: usize, tb: i64, rot: i64) -> Result<LegendrianLedger> {
        if (tb + rot).rem_euclid(2) == 0 {
            return Err(Error::Legendrian(format!(
                "tb + rot must be odd, got tb={tb}, rot={rot}"
            )));
        }
        Ok(LegendrianLedger { knot, tb, rot, overtwisted: false, changed_xi: 0 })
    }
}

/// Stabilization: tb drops by one, rot moves by the chosen sign.
pub fn stabilize(l: &LegendrianLedger, sign: i64) -> Result<LegendrianLedger> {
    if sign.abs() != 1 {
        return Err(Error::Legendrian(format!("stabilization sign must be ±1, got {sign}")));
    }
    let mut out = l.clone();
    out.tb -= 1;
    out.rot += sign;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Positive stabilization: (tb, rot) += (−1, +1).
    SPlus,
    /// Negative stabilization: (tb, rot) += (−1, −1).
    SMinus,
    /// Positive destabilization: (tb, rot) += (+1, −1).
    DPlus,
    /// Negative destabilization: (tb, rot) += (+1, +1).
    DMinus,
}

impl Move {
    pub fn delta(self) -> (i64, i64) {
        match self {
            Move::SPlus => (-1, 1),
            Move::SMinus => (-1, -1),
            Move::DPlus => (1, -1),
            Move::DMinus => (1, 1),
        }
    }

    pub fn is_destabilization(self) -> bool {
        matches!(self, Move::DPlus | Move::DMinus)
    }

    fn label(self) -> &'static str {
        match self {
            Move::SPlus => "S+",
            Move::SMinus => "S-",
            Move::DPlus => "D+",
            Move::DMinus => "D-",
        }
    }
}

/// An ordered move sequence together with the running (tb, rot) after each
/// move. Destabilizations only exist up to isotopy in an overtwisted ambient
/// structure, so any plan containing one is flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovePlan {
    pub start: (i64, i64),
    pub moves: Vec<Move>,
    pub requires_overtwisted: bool,
}

impl MovePlan {
    pub fn end(&self) -> (i64, i64) {
        let mut cur = self.start;
        for m in &self.moves {
            let (dt, dr) = m.delta();
            cur = (cur.0 + dt, cur.1 + dr);
        }
        cur
    }

    /// One move per line with the running (tb, rot) after the move.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut cur = self.start;
        out.push_str(&format!("start ({}, {})\n", cur.0, cur.1));
        for m in &self.moves {
            let (dt, dr) = m.delta();
            cur = (cur.0 + dt, cur.1 + dr);
            out.push_str(&format!("{} ({}, {})\n", m.label(), cur.0, cur.1));
        }
        if self.requires_overtwisted {
            out.push_str("note: destabilizations require an overtwisted ambient structure\n");
        }
        out
    }
}

/// Finds the shortest move plan taking (tb, rot) = `start` to `target`.
///
/// rot changes by ±2 at constant tb via the pairs [S+, D-] and [S-, D+];
/// shortest plans never mix opposite stabilization signs, so the plan is
/// all S+ or all S- followed by all D- or all D+. Ties cannot occur under
/// that normal form, and stabilizations are emitted first.
pub fn realize_pair(start: (i64, i64), target: (i64, i64)) -> Result<MovePlan> {
    for (who, (t, r)) in [("start", start), ("target", target)] {
        if (t + r).rem_euclid(2) == 0 {
            return Err(Error::Legendrian(format!(
                "parity mismatch: {who} ({t}, {r}) has even tb + rot"
            )));
        }
    }
    let dt = target.0 - start.0;
    let dr = target.1 - start.1;
    // Move counts a,b,c,d of S+,S-,D+,D- satisfy d−b = (dt+dr)/2 and
    // a−c = (dr−dt)/2; total a+b+c+d is minimized by zeroing one of each pair.
    let u = (dt + dr) / 2;
    let v = (dr - dt) / 2;
    let mut moves = Vec::new();
    moves.extend(std::iter::repeat(Move::SPlus).take(v.max(0) as usize));
    moves.extend(std::iter::repeat(Move::SMinus).take((-u).max(0) as usize));
    moves.extend(std::iter::repeat(Move::DPlus).take((-v).max(0) as usize));
    moves.extend(std::iter::repeat(Move::DMinus).take(u.max(0) as usize));
    let requires_overtwisted = moves.iter().any(|m| m.is_destabilization());
    Ok(MovePlan { start, moves, requires_overtwisted })
}

/// Continued fraction expansion of r − 1 with all entries ≤ −2, together
/// with the stabilization counts for the corresponding surgery chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeExpansion {
    pub entries: Vec<i64>,
    /// |r₁ + 1| for the first knot, |rᵢ + 2| for each push-off after it.
    pub stabilization_counts: Vec<u64>,
}

/// Evaluates r₁ − 1/(r₂ − 1/(⋯)) exactly.
pub fn evaluate_expansion(entries: &[i64]) -> Rational64 {
    let mut acc = Rational64::from_integer(*entries.last().expect("nonempty expansion"));
    for &e in entries.iter().rev().skip(1) {
        acc = Rational64::from_integer(e) - Rational64::from_integer(1) / acc;
    }
    acc
}

/// Expands r − 1 (for r < 0) as the unique continued fraction with integer
/// entries ≤ −2.
pub fn negative_expansion(r: Rational64) -> Result<NegativeExpansion> {
    if r >= Rational64::from_integer(0) {
        return Err(Error::Legendrian(format!("expansion needs r < 0, got {r}")));
    }
    let mut x = r - 1;
    let mut entries = Vec::new();
    loop {
        if x.is_integer() {
            entries.push(x.to_integer());
            break;
        }
        // floor keeps the remainder 1/(entry − x) strictly below −1.
        let e = x.floor().to_integer();
        entries.push(e);
        x = Rational64::from_integer(1) / (Rational64::from_integer(e) - x);
    }
    debug_assert!(entries.iter().all(|&e| e <= -2));
    debug_assert_eq!(evaluate_expansion(&entries), r - 1);
    let stabilization_counts = entries
        .iter()
        .enumerate()
        .map(|(i, &e)| if i == 0 { (e + 1).unsigned_abs() } else { (e + 2).unsigned_abs() })
        .collect();
    Ok(NegativeExpansion { entries, stabilization_counts })
}

/// Turns a positive surgery coefficient p/q into k +1-surgeries followed by
/// one negative coefficient: the minimal k with q − kp < 0, and
/// r′ = p/(q − kp).
pub fn positive_reduction(p: i64, q: i64) -> Result<(i64, Rational64)> {
    if p <= 0 || q <= 0 {
        return Err(Error::Legendrian(format!("need p, q > 0, got p={p}, q={q}")));
    }
    if num_integer::gcd(p, q) != 1 {
        return Err(Error::Legendrian(format!("p={p} and q={q} are not coprime")));
    }
    let k = q / p + 1;
    let r = Rational64::new(p, q - k * p);
    debug_assert!(q - k * p < 0 && q - (k - 1) * p >= 0);
    Ok((k, r))
}

/// Realizes a contact r-surgery along a marked page knot as honest ±1
/// page-framing surgeries: stabilizations of the knot and its push-offs on
/// the page, then one monodromy twist per surgery (positive for each
/// −1-surgery, negative for each +1-surgery). The page stays genus 0.
pub fn surgery_on_page(
    ob: &PlanarOpenBook,
    knot_id: usize,
    r: Rational64,
) -> Result<PlanarOpenBook> {
    if r == Rational64::from_integer(0) {
        return Err(Error::Legendrian("contact 0-surgery is not defined".into()));
    }
    if !ob.knots.iter().any(|k| k.id == knot_id) {
        return Err(Error::Legendrian(format!("no knot {knot_id} marked on the page")));
    }

    // Direct ±1 coefficients need no expansion: one twist at page framing.
    if r.abs() == Rational64::from_integer(1) {
        let mut out = ob.clone();
        let curve = out.knots.iter().find(|k| k.id == knot_id).unwrap().curve.clone();
        add_twist_along(&mut out, curve.punctures, -r.signum().to_integer());
        return Ok(out);
    }

    if r > Rational64::from_integer(0) {
        let (k, neg) = positive_reduction(*r.numer(), *r.denom())?;
        let mut out = ob.clone();
        // k +1-surgeries along page push-offs of the knot, then the
        // remaining negative coefficient along the knot itself.
        let curve = out.knots.iter().find(|k| k.id == knot_id).unwrap().curve.clone();
        for _ in 0..k {
            add_twist_along(&mut out, curve.punctures.clone(), -1);
        }
        return surgery_on_page(&out, knot_id, neg);
    }

    let expansion = negative_expansion(r)?;
    let mut out = ob.clone();
    // The chain: the knot itself, then one push-off per further entry, each
    // stabilized on the page before its −1-surgery twist. Push-offs are
    // marked as fresh knots so their curves can be stabilized the same way.
    let mut chain_id = knot_id;
    for (i, &count) in expansion.stabilization_counts.iter().enumerate() {
        if i > 0 {
            let prev = out.knots.iter().find(|k| k.id == chain_id).unwrap().curve.clone();
            let id = next_knot_id(&out);
            out.knots.push(MarkedKnot { id, curve: prev });
            chain_id = id;
        }
        for _ in 0..count {
            let (book, _) = stabilize_knot_on_page(&out, chain_id, 1)?;
            out = book;
        }
        let curve = out.knots.iter().find(|k| k.id == chain_id).unwrap().curve.clone();
        add_twist_along(&mut out, curve.punctures, 1);
    }
    Ok(out)
}

fn add_twist_along(ob: &mut PlanarOpenBook, punctures: Vec<usize>, sign: i64) {
    let rank = ob.monodromy.iter().filter(|t| t.curve.punctures == punctures).count();
    ob.monodromy.push(Twist { sign, curve: PageCurve::new(punctures, rank) });
}

fn next_knot_id(ob: &PlanarOpenBook) -> usize {
    ob.punctures
        .iter()
        .chain(std::iter::once(&ob.outer))
        .chain(ob.knots.iter().map(|k| &k.id))
        .max()
        .map_or(0, |m| m + 1)
}

/// Input to the d3 computation: invariants of the 4-manifold bounded by the
/// surgered contact 3-manifold, plus the number of +1-contact surgeries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourManifoldData {
    pub sigma: i64,
    pub chi: i64,
    pub c_squared: i64,
    pub plus_one_surgeries: i64,
}

/// d₃ = ¼(c² − 3σ − 2χ) + q, exact.
pub fn d3(f: &FourManifoldData) -> Rational64 {
    Rational64::new(f.c_squared - 3 * f.sigma - 2 * f.chi, 4)
        + Rational64::from_integer(f.plus_one_surgeries)
}

/// Renders a rational as "a/b" with positive denominator.
pub fn render_rational(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Ambient context for support genus bounds.
#[derive(Debug, Clone, Copy, Default)]
pub struct SgContext {
    pub weakly_fillable: bool,
    pub standard_s3: bool,
    /// A genus-0 open book containing the knot on a page has been exhibited.
    pub genus_zero_witness: bool,
}

/// What can honestly be said about the support genus of the knot and of the
/// ambient contact structure. Absent evidence, no bound is claimed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgReport {
    pub knot_positive: bool,
    pub knot_zero: bool,
    pub structure_zero: bool,
    pub lines: Vec<String>,
}

impl SgReport {
    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

pub fn sg_predicates(l: &LegendrianLedger, ctx: &SgContext) -> SgReport {
    let mut lines = Vec::new();
    let mut knot_positive = false;
    let mut knot_zero = false;
    let mut structure_zero = false;
    if (ctx.weakly_fillable && l.tb > 0) || (ctx.standard_s3 && l.tb >= 0) {
        knot_positive = true;
        lines.push(format!("sg(L) > 0: tb = {} forbids a planar page for L", l.tb));
    }
    if ctx.genus_zero_witness {
        knot_zero = true;
        structure_zero = true;
        lines.push("sg(L) = 0: witnessed by a genus-0 open book".into());
        lines.push("sg(xi) = 0: follows from sg(L) >= sg(xi)".into());
    } else {
        lines.push("sg(L) >= sg(xi): any page for L supports xi".into());
    }
    if !knot_positive && !knot_zero {
        lines.push("no bound claimed".into());
    }
    SgReport { knot_positive, knot_zero, structure_zero, lines }
}
