//! Plat presentations of knots and links.
//!
//! A 2n-plat caps a 2n-strand braid with simple arcs top and bottom. The
//! shifted form offsets the bottom caps by one; a shifted plat whose braid
//! is pure has identity permutation, which is what the downstream surgery
//! compiler consumes. `purify` converts any shifted plat into a pure
//! braided one by cap slides, keeping a move log that replays exactly.

use crate::braid::BraidWord;
use crate::{Error, Result};

/// Perfect matching of 2n endpoint positions (1-based).
pub type Pairing = Vec<(usize, usize)>;

fn plain_pairing(strands: usize) -> Pairing {
    (0..strands / 2).map(|k| (2 * k + 1, 2 * k + 2)).collect()
}

fn shifted_pairing(strands: usize) -> Pairing {
    let mut p = vec![(strands, 1)];
    p.extend((1..strands / 2).map(|k| (2 * k, 2 * k + 1)));
    p
}

fn is_perfect_matching(pairing: &Pairing, strands: usize) -> bool {
    let mut seen = vec![false; strands + 1];
    for &(a, b) in pairing {
        if a == 0 || b == 0 || a > strands || b > strands || a == b || seen[a] || seen[b] {
            return false;
        }
        seen[a] = true;
        seen[b] = true;
    }
    seen[1..].iter().all(|&s| s)
}

/// A braid capped by arcs at top and bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatPresentation {
    braid: BraidWord,
    top: Pairing,
    bottom: Pairing,
    shifted: bool,
}

impl PlatPresentation {
    /// Plain plat: caps (1,2)(3,4)... on both sides.
    pub fn plain(braid: BraidWord) -> Result<Self> {
        let n = braid.strands();
        if n % 2 != 0 {
            return Err(Error::Plat(format!("plat needs an even strand count, got {n}")));
        }
        Ok(PlatPresentation {
            top: plain_pairing(n),
            bottom: plain_pairing(n),
            braid,
            shifted: false,
        })
    }

    pub fn with_pairings(
        braid: BraidWord,
        top: Pairing,
        bottom: Pairing,
        shifted: bool,
    ) -> Result<Self> {
        let n = braid.strands();
        if n % 2 != 0 {
            return Err(Error::Plat(format!("plat needs an even strand count, got {n}")));
        }
        if !is_perfect_matching(&top, n) || !is_perfect_matching(&bottom, n) {
            return Err(Error::Plat("cap pairings must be perfect matchings".into()));
        }
        Ok(PlatPresentation {
            braid,
            top,
            bottom,
            shifted,
        })
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn strands(&self) -> usize {
        self.braid.strands()
    }

    pub fn top_pairing(&self) -> &Pairing {
        &self.top
    }

    pub fn bottom_pairing(&self) -> &Pairing {
        &self.bottom
    }

    pub fn is_shifted(&self) -> bool {
        self.shifted
    }

    pub fn is_pure_braided(&self) -> bool {
        self.shifted && self.braid.is_pure()
    }

    /// Number of link components of the plat closure, from the union graph
    /// of cap pairings and strand edges.
    pub fn component_count(&self) -> usize {
        let n = self.strands();
        let perm = self.braid.permutation();
        // Nodes: 1..n are top endpoints, n+1..2n bottom endpoints.
        let mut next = vec![0usize; 2 * n + 1];
        let mut pair_of = vec![0usize; 2 * n + 1];
        for &(a, b) in &self.top {
            pair_of[a] = b;
            pair_of[b] = a;
        }
        for &(a, b) in &self.bottom {
            pair_of[n + a] = n + b;
            pair_of[n + b] = n + a;
        }
        for t in 1..=n {
            next[t] = n + perm.apply(t);
            next[n + perm.apply(t)] = t;
        }
        let mut seen = vec![false; 2 * n + 1];
        let mut components = 0;
        for start in 1..=2 * n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut v = start;
            loop {
                seen[v] = true;
                let w = next[v];
                seen[w] = true;
                v = pair_of[w];
                if v == start {
                    break;
                }
            }
        }
        components
    }

    /// Link component of each strand position (0-based component index,
    /// numbered by smallest strand position they contain).
    pub fn strand_components(&self) -> Vec<usize> {
        let n = self.strands();
        let perm = self.braid.permutation();
        let mut pair_of = vec![0usize; 2 * n + 1];
        for &(a, b) in &self.top {
            pair_of[a] = b;
            pair_of[b] = a;
        }
        for &(a, b) in &self.bottom {
            pair_of[n + a] = n + b;
            pair_of[n + b] = n + a;
        }
        // Strand s runs from top position s to bottom position perm(s).
        let mut comp = vec![usize::MAX; n + 1];
        let mut next_comp = 0;
        for start in 1..=n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut v = start; // top position
            loop {
                comp[v] = next_comp;
                let bottom = n + perm.apply(v);
                let w = pair_of[bottom] - n; // partner bottom position
                // strand ending at bottom position w starts at top apply_inverse(w)
                let t = perm.apply_inverse(w);
                let v2 = pair_of[t]; // cross the top cap
                if comp[t] == usize::MAX {
                    comp[t] = next_comp;
                }
                if v2 == start || comp[v2] != usize::MAX {
                    break;
                }
                v = v2;
            }
            next_comp += 1;
        }
        comp.remove(0);
        comp
    }

    /// Stable text format: header "plat 2n [shifted]", braid word line,
    /// explicit pairings.
    pub fn render(&self) -> String {
        let mut out = format!(
            "plat {}{}\n",
            self.strands(),
            if self.shifted { " shifted" } else { "" }
        );
        out.push_str(&format!("braid {}\n", self.braid.render()));
        let fmt_pairs = |p: &Pairing| {
            p.iter()
                .map(|(a, b)| format!("{a}-{b}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&format!("top {}\n", fmt_pairs(&self.top)));
        out.push_str(&format!("bottom {}\n", fmt_pairs(&self.bottom)));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut strands = None;
        let mut shifted = false;
        let mut braid = None;
        let mut top = None;
        let mut bottom = None;
        let parse_pairs = |rest: &str| -> Result<Pairing> {
            rest.split_whitespace()
                .map(|tok| {
                    let (a, b) = tok
                        .split_once('-')
                        .ok_or_else(|| Error::Parse(format!("bad pair {tok:?}")))?;
                    Ok((
                        a.parse().map_err(|_| Error::Parse(format!("bad pair {tok:?}")))?,
                        b.parse().map_err(|_| Error::Parse(format!("bad pair {tok:?}")))?,
                    ))
                })
                .collect()
        };
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("plat ") {
                let mut toks = rest.split_whitespace();
                strands = Some(
                    toks.next()
                        .ok_or_else(|| Error::Parse("missing strand count".into()))?
                        .parse::<usize>()
                        .map_err(|_| Error::Parse("bad strand count".into()))?,
                );
                shifted = toks.next() == Some("shifted");
            } else if let Some(rest) = line.strip_prefix("braid") {
                let n = strands.ok_or_else(|| Error::Parse("braid before plat header".into()))?;
                braid = Some(BraidWord::parse(rest, Some(n))?);
            } else if let Some(rest) = line.strip_prefix("top ") {
                top = Some(parse_pairs(rest)?);
            } else if let Some(rest) = line.strip_prefix("bottom ") {
                bottom = Some(parse_pairs(rest)?);
            } else {
                return Err(Error::Parse(format!("unrecognized plat line {line:?}")));
            }
        }
        let n = strands.ok_or_else(|| Error::Parse("missing plat header".into()))?;
        let braid = braid.unwrap_or_else(|| BraidWord::identity(n));
        let top = top.unwrap_or_else(|| plain_pairing(n));
        let bottom = bottom.unwrap_or_else(|| {
            if shifted {
                shifted_pairing(n)
            } else {
                plain_pairing(n)
            }
        });
        PlatPresentation::with_pairings(braid, top, bottom, shifted)
    }
}

/// Convert a braid closure on n strands to a plain 2n-plat.
///
/// The plat braid is `b0 · b~ · b0^{-1}` where `b~` appends n trivial
/// strands to `b` and the conjugator `b0 = Π_{k=1}^{n-1} σ_{k+1} ⋯ σ_{2n-k}`
/// interleaves each appended strand beside the original it closes off. At
/// n = 3 this is `(σ2 σ3 σ4 σ5)(σ3 σ4)`.
pub fn closure_to_plat(b: &BraidWord) -> Result<PlatPresentation> {
    let n = b.strands();
    let two_n = 2 * n;
    let mut b0 = BraidWord::identity(two_n);
    for k in 1..n {
        let seg = BraidWord::parse(
            &((k + 1)..=(two_n - k))
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            Some(two_n),
        )?;
        b0 = b0.concat(&seg);
    }
    let braid = b0.concat(&b.embed(two_n)).concat(&b0.inverse());
    PlatPresentation::plain(braid)
}

/// Slide the bottom caps by one to produce the shifted plat of the same
/// link: append the cyclic braid `σ_1 ⋯ σ_{2n-1}` and use the offset
/// bottom pairing.
pub fn shift(p: &PlatPresentation) -> Result<PlatPresentation> {
    if p.shifted {
        return Err(Error::Plat("plat is already shifted".into()));
    }
    let n = p.strands();
    let delta = BraidWord::parse(
        &(1..n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
        Some(n),
    )?;
    PlatPresentation::with_pairings(
        p.braid.concat(&delta),
        p.top.clone(),
        shifted_pairing(n),
        true,
    )
}

/// One elementary isotopy of a plat diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlatMove {
    /// Slide the top cap at positions (cap, cap+1) left to (target,
    /// target+1); `flip` brings the cap's right endpoint to `target`.
    SlideUpper { cap: usize, target: usize, flip: bool },
    /// Same for a bottom cap.
    SlideLower { cap: usize, target: usize, flip: bool },
    /// Drag a single bottom endpoint left from `from` to `to` (closing a
    /// wrapped cap of one link component).
    SlideLowerEndpoint { from: usize, to: usize },
}

/// Replayable log of the moves performed by `purify`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlatMoveLog {
    pub moves: Vec<PlatMove>,
}

impl PlatMoveLog {
    pub fn render(&self) -> String {
        self.moves
            .iter()
            .map(|m| match m {
                PlatMove::SlideUpper { cap, target, flip } => {
                    format!("slide-upper {cap} -> {target}{}", if *flip { " flip" } else { "" })
                }
                PlatMove::SlideLower { cap, target, flip } => {
                    format!("slide-lower {cap} -> {target}{}", if *flip { " flip" } else { "" })
                }
                PlatMove::SlideLowerEndpoint { from, to } => {
                    format!("slide-lower-endpoint {from} -> {to}")
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn ascending(n: usize, lo: usize, hi: usize, sign: i8) -> BraidWord {
    // σ_lo σ_{lo+1} ... σ_hi (empty when lo > hi), all with `sign`.
    let text = (lo..=hi)
        .map(|i| (sign as i64 * i as i64).to_string())
        .collect::<Vec<_>>()
        .join(" ");
    BraidWord::parse(&text, Some(n)).expect("indices in range")
}

fn block_slide_word(n: usize, target: usize, cap: usize, flip: bool) -> BraidWord {
    // Permutation: target -> cap, target+1 -> cap+1 (swapped when
    // flipped), k -> k-2 for target+2 <= k <= cap+1.
    let block = ascending(n, target + 1, cap, 1).concat(&ascending(n, target, cap - 1, 1));
    if flip {
        ascending(n, target, target, 1).concat(&block)
    } else {
        block
    }
}

fn relabel_pairing(pairing: &Pairing, map: impl Fn(usize) -> usize) -> Pairing {
    pairing.iter().map(|&(a, b)| (map(a), map(b))).collect()
}

/// Apply one move to a plat, rewriting the braid and the pairings.
pub fn apply_move(p: &PlatPresentation, mv: PlatMove) -> Result<PlatPresentation> {
    let n = p.strands();
    match mv {
        PlatMove::SlideUpper { cap, target, flip } => {
            if cap < target || cap + 1 > n {
                return Err(Error::Plat(format!("bad upper slide {cap} -> {target}")));
            }
            let m = block_slide_word(n, target, cap, flip);
            let perm = m.permutation();
            // New top position q pairs via the old pairing of perm(q).
            let inv = |old: usize| perm.apply_inverse(old);
            PlatPresentation::with_pairings(
                m.concat(&p.braid),
                relabel_pairing(&p.top, |old| inv(old)),
                p.bottom.clone(),
                p.shifted,
            )
        }
        PlatMove::SlideLower { cap, target, flip } => {
            if cap < target || cap + 1 > n {
                return Err(Error::Plat(format!("bad lower slide {cap} -> {target}")));
            }
            let m = block_slide_word(n, target, cap, flip).inverse();
            let perm = m.permutation();
            PlatPresentation::with_pairings(
                p.braid.concat(&m),
                p.top.clone(),
                relabel_pairing(&p.bottom, |old| perm.apply(old)),
                p.shifted,
            )
        }
        PlatMove::SlideLowerEndpoint { from, to } => {
            if from < to || from > n {
                return Err(Error::Plat(format!("bad endpoint slide {from} -> {to}")));
            }
            // σ_{from-1} σ_{from-2} ... σ_to moves position `from` to `to`.
            let mut m = BraidWord::identity(n);
            for i in (to..from).rev() {
                m = m.concat(&ascending(n, i, i, 1));
            }
            let perm = m.permutation();
            PlatPresentation::with_pairings(
                p.braid.concat(&m),
                p.top.clone(),
                relabel_pairing(&p.bottom, |old| perm.apply(old)),
                p.shifted,
            )
        }
    }
}

/// Replay a move log on a plat.
pub fn replay(p: &PlatPresentation, log: &PlatMoveLog) -> Result<PlatPresentation> {
    let mut cur = p.clone();
    for &mv in &log.moves {
        cur = apply_move(&cur, mv)?;
    }
    Ok(cur)
}

/// Purify a shifted plat: cap slides until the braid permutation is the
/// identity. Works for knots and links; each link component ends up in its
/// own wrapped block of bottom caps.
pub fn purify(p: &PlatPresentation) -> Result<(PlatPresentation, PlatMoveLog)> {
    if !p.shifted {
        return Err(Error::Plat("purify expects a shifted plat".into()));
    }
    let n = p.strands();
    let mut cur = p.clone();
    let mut log = PlatMoveLog::default();
    let mut next_top = 1usize;
    let mut next_bottom = 1usize;

    fn partner_of(pairing: &Pairing, pos: usize) -> usize {
        for &(a, b) in pairing {
            if a == pos {
                return b;
            }
            if b == pos {
                return a;
            }
        }
        unreachable!("position {pos} not matched");
    }

    while next_bottom <= n {
        // Start a new chain at the leftmost unused bottom position. Its
        // cap partner floats to the right until the chain closes on it.
        let start = next_bottom;
        next_bottom += 1;
        let mut at_bottom = start;
        loop {
            // Walk up: slide the cap over this strand's top endpoint into
            // the next free pair of top slots.
            let y = cur.braid().permutation().apply_inverse(at_bottom);
            let partner = partner_of(cur.top_pairing(), y);
            let (cap, flip) = if y < partner { (y, false) } else { (partner, true) };
            if cap + 1 != cap.max(y.max(partner)) {
                return Err(Error::Plat(format!("non-adjacent top cap at {cap}")));
            }
            let target = next_top;
            if cap != target || flip {
                let mv = PlatMove::SlideUpper { cap, target, flip };
                cur = apply_move(&cur, mv)?;
                log.moves.push(mv);
            }
            next_top += 2;
            // Walk down from the cap partner at top position target+1.
            let x = cur.braid().permutation().apply(target + 1);
            let float = partner_of(cur.bottom_pairing(), start);
            if x == float {
                // Chain closes: drag the wrapped cap's floating endpoint
                // to the next free bottom slot.
                let slot = next_bottom;
                if x != slot {
                    let mv = PlatMove::SlideLowerEndpoint { from: x, to: slot };
                    cur = apply_move(&cur, mv)?;
                    log.moves.push(mv);
                }
                next_bottom = slot + 1;
                break;
            }
            let partner = partner_of(cur.bottom_pairing(), x);
            let (cap, flip) = if x < partner { (x, false) } else { (partner, true) };
            if cap + 1 != cap.max(x.max(partner)) {
                return Err(Error::Plat(format!("non-adjacent bottom cap at {cap}")));
            }
            let slot = next_bottom;
            if cap != slot || flip {
                let mv = PlatMove::SlideLower { cap, target: slot, flip };
                cur = apply_move(&cur, mv)?;
                log.moves.push(mv);
            }
            next_bottom = slot + 2;
            at_bottom = slot + 1;
        }
    }

    if !cur.braid().is_pure() {
        return Err(Error::Certificate(
            "purify finished without reaching a pure braid".into(),
        ));
    }
    Ok((cur, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid(text: &str, n: usize) -> BraidWord {
        BraidWord::parse(text, Some(n)).unwrap()
    }

    #[test]
    fn figure_eight_closure_conjugator() {
        let b = braid("-2 1 -2 1", 3);
        let p = closure_to_plat(&b).unwrap();
        assert_eq!(p.strands(), 6);
        // b0 b~ b0^{-1} with b0 = (σ2 σ3 σ4 σ5)(σ3 σ4)
        let b0 = braid("2 3 4 5 3 4", 6);
        let expect = b0.concat(&b.embed(6)).concat(&b0.inverse());
        assert_eq!(p.braid(), &expect);
    }

    #[test]
    fn unknot_plat_is_trivial() {
        let p = closure_to_plat(&BraidWord::identity(1)).unwrap();
        assert_eq!(p.strands(), 2);
        assert!(p.braid().is_empty());
        assert_eq!(p.component_count(), 1);
    }

    #[test]
    fn sigma1_closure_has_one_component() {
        let p = closure_to_plat(&braid("1", 2)).unwrap();
        assert_eq!(p.strands(), 4);
        assert_eq!(p.component_count(), 1);
    }

    #[test]
    fn closure_preserves_component_count() {
        for (text, n, comps) in [
            ("", 2, 2),
            ("1", 2, 1),
            ("1 1", 2, 2),
            ("-2 1 -2 1", 3, 1),
            ("1 1 1", 2, 1),
            ("1 2", 3, 1),
        ] {
            let p = closure_to_plat(&braid(text, n)).unwrap();
            assert_eq!(p.component_count(), comps, "closure of {text:?} on {n}");
        }
    }

    #[test]
    fn shift_preserves_components() {
        let p = closure_to_plat(&braid("-2 1 -2 1", 3)).unwrap();
        let s = shift(&p).unwrap();
        assert!(s.is_shifted());
        assert_eq!(s.component_count(), 1);
        assert!(shift(&s).is_err());
    }

    #[test]
    fn shift_unknot() {
        let p = closure_to_plat(&BraidWord::identity(1)).unwrap();
        let s = shift(&p).unwrap();
        assert_eq!(s.component_count(), 1);
        assert_eq!(s.bottom_pairing(), &vec![(2, 1)]);
    }

    #[test]
    fn purify_figure_eight() {
        let p = shift(&closure_to_plat(&braid("-2 1 -2 1", 3)).unwrap()).unwrap();
        let (pure, log) = purify(&p).unwrap();
        assert!(pure.is_pure_braided());
        assert_eq!(pure.component_count(), 1);
        assert_eq!(&replay(&p, &log).unwrap(), &pure);
    }

    #[test]
    fn purify_already_pure_is_identity() {
        // σ1^2 with wrapped bottom caps is already a pure braided plat.
        let p = PlatPresentation::with_pairings(
            braid("1 1", 2),
            vec![(1, 2)],
            vec![(2, 1)],
            true,
        )
        .unwrap();
        let (pure, log) = purify(&p).unwrap();
        assert!(log.moves.is_empty());
        assert_eq!(pure, p);
    }

    #[test]
    fn purify_shifted_unknot() {
        let p = shift(&closure_to_plat(&BraidWord::identity(1)).unwrap()).unwrap();
        let (pure, log) = purify(&p).unwrap();
        assert!(pure.is_pure_braided());
        assert_eq!(pure.component_count(), 1);
        assert_eq!(&replay(&p, &log).unwrap(), &pure);
    }

    #[test]
    fn purify_two_component_unlink() {
        let p = shift(&closure_to_plat(&BraidWord::identity(2)).unwrap()).unwrap();
        let before = p.component_count();
        let (pure, log) = purify(&p).unwrap();
        assert!(pure.braid().is_pure());
        assert_eq!(pure.component_count(), before);
        assert_eq!(&replay(&p, &log).unwrap(), &pure);
    }

    #[test]
    fn purify_hopf_link() {
        let p = shift(&closure_to_plat(&braid("1 1", 2)).unwrap()).unwrap();
        assert_eq!(p.component_count(), 2);
        let (pure, log) = purify(&p).unwrap();
        assert!(pure.braid().is_pure());
        assert_eq!(pure.component_count(), 2);
        assert_eq!(&replay(&p, &log).unwrap(), &pure);
    }

    #[test]
    fn plat_text_round_trip() {
        let p = shift(&closure_to_plat(&braid("-2 1 -2 1", 3)).unwrap()).unwrap();
        let text = p.render();
        assert_eq!(PlatPresentation::parse(&text).unwrap(), p);
    }
}
