//! Framed-link surgery calculus at the linking-matrix level.
//!
//! Diagrams are modeled as components with integer framings plus a symmetric
//! linking matrix; curves are never drawn. Blow-ups and blow-downs are exact
//! matrix moves with replayable event logs. The unknotting compiler removes
//! every generator twist of a combed pure plat braid by blowing up small
//! gadgets of unknots, and every claim it makes is backed by checkable
//! certificates: the conditions report, homology divisors, and replay.

use std::collections::BTreeMap;

use crate::braid::PureGeneratorWord;
use crate::plat::PlatPresentation;
use crate::{Error, Result};

/// Role of a diagram component.
///
/// `Knot` components are the input link; they are never surgered. After
/// compilation they are `Unknotted` (the blow-ups have undone all crossings).
/// `Binding` components are the 0-framed unknots destined to become binding
/// circles, `Twist` the ±1-framed unknots destined to become Dehn twists,
/// and `Ambient` the ±1-framed surgery curves of a non-S³ ambient manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Knot,
    Unknotted,
    Binding,
    Twist,
    Ambient,
}

impl Role {
    pub fn token(self) -> &'static str {
        match self {
            Role::Knot => "K",
            Role::Unknotted => "UK",
            Role::Binding => "L0",
            Role::Twist => "Lpm",
            Role::Ambient => "LM",
        }
    }

    pub fn parse(tok: &str) -> Result<Role> {
        match tok {
            "K" => Ok(Role::Knot),
            "UK" => Ok(Role::Unknotted),
            "L0" => Ok(Role::Binding),
            "Lpm" => Ok(Role::Twist),
            "LM" => Ok(Role::Ambient),
            _ => Err(Error::Parse(format!("unknown role token '{tok}'"))),
        }
    }

    /// Knot components carry no surgery coefficient.
    pub fn is_framed(self) -> bool {
        !matches!(self, Role::Knot | Role::Unknotted)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    pub role: Role,
    pub framing: i64,
}

/// A framed link diagram: components, symmetric linking matrix (sparse),
/// and for each twist curve the ordered set of components it encircles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedLinkDiagram {
    comps: Vec<Component>,
    lk: BTreeMap<(usize, usize), i64>,
    enclosures: BTreeMap<usize, Vec<usize>>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl FramedLinkDiagram {
    pub fn new() -> Self {
        FramedLinkDiagram {
            comps: Vec::new(),
            lk: BTreeMap::new(),
            enclosures: BTreeMap::new(),
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    pub fn component(&self, id: usize) -> Option<&Component> {
        self.comps.iter().find(|c| c.id == id)
    }

    pub fn add_component(&mut self, id: usize, role: Role, framing: i64) -> Result<()> {
        if self.component(id).is_some() {
            return Err(Error::Kirby(format!("duplicate component id {id}")));
        }
        self.comps.push(Component { id, role, framing });
        self.comps.sort_by_key(|c| c.id);
        Ok(())
    }

    fn comp_mut(&mut self, id: usize) -> Result<&mut Component> {
        self.comps
            .iter_mut()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::Kirby(format!("unknown component id {id}")))
    }

    pub fn set_role(&mut self, id: usize, role: Role) -> Result<()> {
        self.comp_mut(id)?.role = role;
        Ok(())
    }

    pub fn set_framing(&mut self, id: usize, framing: i64) -> Result<()> {
        self.comp_mut(id)?.framing = framing;
        Ok(())
    }

    pub fn linking(&self, a: usize, b: usize) -> i64 {
        if a == b {
            return 0;
        }
        *self.lk.get(&key(a, b)).unwrap_or(&0)
    }

    pub fn set_linking(&mut self, a: usize, b: usize, v: i64) -> Result<()> {
        if a == b {
            return Err(Error::Kirby("linking is off-diagonal only".into()));
        }
        if self.component(a).is_none() || self.component(b).is_none() {
            return Err(Error::Kirby(format!("unknown component in lk {a} {b}")));
        }
        if v == 0 {
            self.lk.remove(&key(a, b));
        } else {
            self.lk.insert(key(a, b), v);
        }
        Ok(())
    }

    fn add_linking(&mut self, a: usize, b: usize, dv: i64) {
        if a == b || dv == 0 {
            return;
        }
        let e = self.lk.entry(key(a, b)).or_insert(0);
        *e += dv;
        if *e == 0 {
            self.lk.remove(&key(a, b));
        }
    }

    pub fn enclosure(&self, id: usize) -> &[usize] {
        self.enclosures.get(&id).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn set_enclosure(&mut self, id: usize, inside: Vec<usize>) -> Result<()> {
        if self.component(id).is_none() {
            return Err(Error::Kirby(format!("unknown component id {id}")));
        }
        if inside.is_empty() {
            self.enclosures.remove(&id);
        } else {
            self.enclosures.insert(id, inside);
        }
        Ok(())
    }

    pub fn clear_enclosures(&mut self) {
        self.enclosures.clear();
    }

    /// Adds the event's unknot: new component with framing = sign, linking
    /// λ_i with each threaded component i, and for the already-present
    /// components framing(i) += sign·λ_i², lk(i,j) += sign·λ_i·λ_j. The
    /// presented manifold is unchanged.
    pub fn blow_up(&self, e: &BlowUpEvent) -> Result<FramedLinkDiagram> {
        if e.sign.abs() != 1 {
            return Err(Error::Kirby(format!("blow-up sign must be ±1, got {}", e.sign)));
        }
        let mut lam: BTreeMap<usize, i64> = BTreeMap::new();
        for &(id, l) in &e.threaded {
            if self.component(id).is_none() {
                return Err(Error::Kirby(format!("blow-up threads unknown component {id}")));
            }
            *lam.entry(id).or_insert(0) += l;
        }
        lam.retain(|_, l| *l != 0);
        let mut d = self.clone();
        d.add_component(e.new_id, e.role, e.sign)?;
        let ids: Vec<(usize, i64)> = lam.into_iter().collect();
        for &(i, li) in &ids {
            if d.component(i).unwrap().role.is_framed() {
                d.comp_mut(i)?.framing += e.sign * li * li;
            }
            d.set_linking(e.new_id, i, li)?;
        }
        for (x, &(i, li)) in ids.iter().enumerate() {
            for &(j, lj) in &ids[x + 1..] {
                d.add_linking(i, j, e.sign * li * lj);
            }
        }
        Ok(d)
    }

    /// Removes a ±1-framed unknot, reversing the blow-up updates on
    /// everything it links. Exact inverse of `blow_up`.
    pub fn blow_down(&self, id: usize) -> Result<FramedLinkDiagram> {
        let c = self
            .component(id)
            .ok_or_else(|| Error::Kirby(format!("unknown component id {id}")))?;
        let s = c.framing;
        if s.abs() != 1 || !c.role.is_framed() {
            return Err(Error::Kirby(format!(
                "component {id} is not a ±1-framed unknot (framing {s})"
            )));
        }
        let lam: Vec<(usize, i64)> = self
            .comps
            .iter()
            .filter(|o| o.id != id)
            .map(|o| (o.id, self.linking(id, o.id)))
            .filter(|&(_, l)| l != 0)
            .collect();
        let mut d = self.clone();
        for &(i, li) in &lam {
            if d.component(i).unwrap().role.is_framed() {
                d.comp_mut(i)?.framing -= s * li * li;
            }
        }
        for (x, &(i, li)) in lam.iter().enumerate() {
            for &(j, lj) in &lam[x + 1..] {
                d.add_linking(i, j, -s * li * lj);
            }
        }
        d.comps.retain(|o| o.id != id);
        d.lk.retain(|&(a, b), _| a != id && b != id);
        d.enclosures.remove(&id);
        for v in d.enclosures.values_mut() {
            v.retain(|&o| o != id);
        }
        d.enclosures.retain(|_, v| !v.is_empty());
        Ok(d)
    }

    /// Ids of the surgered (framed) components, in id order.
    pub fn framed_ids(&self) -> Vec<usize> {
        self.comps
            .iter()
            .filter(|c| c.role.is_framed())
            .map(|c| c.id)
            .collect()
    }

    /// Framed linking matrix over the surgered components: framings on the
    /// diagonal, linking numbers off it.
    pub fn framed_matrix(&self) -> (Vec<usize>, Vec<Vec<i64>>) {
        let ids = self.framed_ids();
        let n = ids.len();
        let mut m = vec![vec![0i64; n]; n];
        for (x, &i) in ids.iter().enumerate() {
            m[x][x] = self.component(i).unwrap().framing;
            for (y, &j) in ids.iter().enumerate().skip(x + 1) {
                m[x][y] = self.linking(i, j);
                m[y][x] = m[x][y];
            }
        }
        (ids, m)
    }

    /// Determinant of the framed linking matrix (1 for the empty matrix).
    pub fn framed_det(&self) -> i128 {
        let (_, m) = self.framed_matrix();
        det_i128(&m)
    }

    /// Elementary divisors of H₁ of the surgered manifold: Smith normal
    /// form of the framed linking matrix, units dropped. Empty list means
    /// the homology is trivial; a 0 entry is a free ℤ factor.
    pub fn homology(&self) -> Vec<i64> {
        let (_, m) = self.framed_matrix();
        smith_divisors(&m)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comps {
            if c.role.is_framed() {
                out.push_str(&format!("component {} {} {}\n", c.id, c.role.token(), c.framing));
            } else {
                out.push_str(&format!("component {} {} -\n", c.id, c.role.token()));
            }
        }
        for (&(a, b), &v) in &self.lk {
            out.push_str(&format!("lk {a} {b} {v}\n"));
        }
        for (&id, inside) in &self.enclosures {
            let ids: Vec<String> = inside.iter().map(|i| i.to_string()).collect();
            out.push_str(&format!("enclose {id}: {}\n", ids.join(" ")));
        }
        out
    }

    pub fn parse(text: &str) -> Result<FramedLinkDiagram> {
        let mut d = FramedLinkDiagram::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "component" => {
                    if toks.len() != 4 {
                        return Err(Error::Parse(format!("bad component line '{line}'")));
                    }
                    let id = parse_usize(toks[1])?;
                    let role = Role::parse(toks[2])?;
                    let framing = if toks[3] == "-" {
                        if role.is_framed() {
                            return Err(Error::Parse(format!(
                                "component {id} with role {} needs a framing",
                                role.token()
                            )));
                        }
                        0
                    } else {
                        parse_i64(toks[3])?
                    };
                    d.add_component(id, role, framing)?;
                }
                "lk" => {
                    if toks.len() != 4 {
                        return Err(Error::Parse(format!("bad lk line '{line}'")));
                    }
                    d.set_linking(parse_usize(toks[1])?, parse_usize(toks[2])?, parse_i64(toks[3])?)?;
                }
                "enclose" => {
                    let id = parse_usize(toks[1].trim_end_matches(':'))?;
                    let mut inside = Vec::new();
                    for t in &toks[2..] {
                        inside.push(parse_usize(t)?);
                    }
                    d.set_enclosure(id, inside)?;
                }
                _ => return Err(Error::Parse(format!("unknown diagram line '{line}'"))),
            }
        }
        Ok(d)
    }
}

impl Default for FramedLinkDiagram {
    fn default() -> Self {
        Self::new()
    }
}

fn parse_usize(t: &str) -> Result<usize> {
    t.parse()
        .map_err(|_| Error::Parse(format!("expected a nonnegative integer, got '{t}'")))
}

fn parse_i64(t: &str) -> Result<i64> {
    t.parse()
        .map_err(|_| Error::Parse(format!("expected an integer, got '{t}'")))
}

/// One blow-up: a ±1-framed unknot threaded through existing components
/// with signed multiplicities. The role records what the new unknot will
/// become in the compiled diagram. With `down` set the line instead blows
/// the unknot back down; the stored data is its creation data, so the
/// event can be reversed exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowUpEvent {
    pub sign: i64,
    pub threaded: Vec<(usize, i64)>,
    pub new_id: usize,
    pub role: Role,
    pub down: bool,
}

impl BlowUpEvent {
    pub fn render(&self) -> String {
        let verb = if self.down { "blowdown" } else { "blowup" };
        let mut out = format!("{verb} {} {} {}", self.new_id, self.role.token(), self.sign);
        for &(id, l) in &self.threaded {
            out.push_str(&format!(" {id}:{l}"));
        }
        out
    }

    pub fn parse(line: &str) -> Result<BlowUpEvent> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 4 || (toks[0] != "blowup" && toks[0] != "blowdown") {
            return Err(Error::Parse(format!("bad event line '{line}'")));
        }
        let down = toks[0] == "blowdown";
        let new_id = parse_usize(toks[1])?;
        let role = Role::parse(toks[2])?;
        let sign = parse_i64(toks[3])?;
        let mut threaded = Vec::new();
        for t in &toks[4..] {
            let (id, l) = t
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad thread token '{t}'")))?;
            threaded.push((parse_usize(id)?, parse_i64(l)?));
        }
        Ok(BlowUpEvent { sign, threaded, new_id, role, down })
    }
}

pub fn render_events(events: &[BlowUpEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&e.render());
        out.push('\n');
    }
    out
}

pub fn parse_events(text: &str) -> Result<Vec<BlowUpEvent>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(BlowUpEvent::parse)
        .collect()
}

pub fn apply_events(d: &FramedLinkDiagram, events: &[BlowUpEvent]) -> Result<FramedLinkDiagram> {
    let mut cur = d.clone();
    for e in events {
        cur = if e.down { cur.blow_down(e.new_id)? } else { cur.blow_up(e)? };
    }
    Ok(cur)
}

/// Undoes the event log in reverse order: created unknots are blown back
/// down, and blow-downs are re-blown up from their recorded creation data.
pub fn revert_events(d: &FramedLinkDiagram, events: &[BlowUpEvent]) -> Result<FramedLinkDiagram> {
    let mut cur = d.clone();
    for e in events.iter().rev() {
        cur = if e.down {
            cur.blow_up(&BlowUpEvent { down: false, ..e.clone() })?
        } else {
            cur.blow_down(e.new_id)?
        };
    }
    Ok(cur)
}

/// Which blow-ups removed which generator occurrence, and which event was
/// the ring around the twist-site strands (the one whose twist cancels the
/// occurrence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorTrace {
    pub i: usize,
    pub j: usize,
    pub sign: i64,
    pub event_ids: Vec<usize>,
    pub ring_id: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknottingResult {
    /// The bare diagram: just the link components and their mutual linking.
    pub initial: FramedLinkDiagram,
    /// The compiled diagram with roles and enclosures assigned.
    pub diagram: FramedLinkDiagram,
    pub events: Vec<BlowUpEvent>,
    pub trace: Vec<GeneratorTrace>,
    pub positive_mode: bool,
    /// Connect-sum bands recorded by `band_connect`, empty before banding.
    pub bands: Vec<(usize, usize)>,
}

impl UnknottingResult {
    pub fn knot_ids(&self) -> Vec<usize> {
        self.diagram
            .components()
            .iter()
            .filter(|c| !c.role.is_framed())
            .map(|c| c.id)
            .collect()
    }

    /// Checks that replaying the event log from the bare diagram gives the
    /// compiled diagram, and that blowing everything back down returns the
    /// bare diagram, both exactly.
    pub fn verify_replay(&self) -> Result<()> {
        let mut fwd = apply_events(&self.initial, &self.events)?;
        let mut reference = self.diagram.clone();
        // Roles and enclosures are assigned by the compiler after the
        // blow-ups; compare the numeric content and the role each event
        // declared.
        for c in self.initial.components() {
            let role = self.diagram.component(c.id).map_or(Role::Unknotted, |x| x.role);
            fwd.set_role(c.id, role).ok();
        }
        if !self.bands.is_empty() {
            // banding merges components; replay equality is checked on the
            // pre-band result, so rebuild the banded view here
            fwd = band_view(&fwd, &self.bands)?;
        }
        fwd.clear_enclosures();
        reference.clear_enclosures();
        if fwd != reference {
            return Err(Error::Certificate("event replay does not reproduce the diagram".into()));
        }
        if self.bands.is_empty() {
            let back = revert_events(&self.diagram, &self.events)?;
            let mut bare = self.initial.clone();
            for c in self.initial.components() {
                let role = self.diagram.component(c.id).map_or(Role::Unknotted, |x| x.role);
                bare.set_role(c.id, role).ok();
            }
            let mut back = back;
            back.clear_enclosures();
            if back != bare {
                return Err(Error::Certificate(
                    "reverse replay does not reproduce the bare diagram".into(),
                ));
            }
        }
        Ok(())
    }
}

fn band_view(d: &FramedLinkDiagram, bands: &[(usize, usize)]) -> Result<FramedLinkDiagram> {
    let mut out = d.clone();
    for &(target, other) in bands {
        let others: Vec<usize> = out
            .components()
            .iter()
            .filter(|c| c.id != other)
            .map(|c| c.id)
            .collect();
        for o in others {
            let v = out.linking(other, o);
            if o != target {
                out.add_linking(target, o, v);
            }
        }
        out.comps.retain(|c| c.id != other);
        out.lk.retain(|&(a, b), _| a != other && b != other);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    pub name: String,
    pub pass: bool,
    pub offenders: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionsReport {
    pub checks: Vec<ConditionCheck>,
}

impl ConditionsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if c.pass {
                out.push_str(&format!("pass {}\n", c.name));
            } else {
                let ids: Vec<String> = c.offenders.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!("FAIL {} [{}]\n", c.name, ids.join(" ")));
            }
        }
        out
    }
}

/// Verifies the compiled-diagram conditions:
/// (1) each binding unknot links the unknotted link image exactly once;
/// (2) binding unknots are pairwise unlinked;
/// (3) each twist curve is ±1-framed (−1 in positive mode) and does not
///     link the link image;
/// (4) each twist curve encircles a nonempty set of bindings, consistent
///     with its linking numbers;
/// (5) each binding unknot has framing 0.
/// Extra structural checks: the link components are pairwise unlinked, the
/// ambient curves are ±1-framed, and each removed generator occurrence has
/// an honest twist-cancelling ring of the opposite sign.
pub fn check_conditions(r: &UnknottingResult) -> ConditionsReport {
    let d = &r.diagram;
    let knots = r.knot_ids();
    let bindings: Vec<usize> = d
        .components()
        .iter()
        .filter(|c| c.role == Role::Binding)
        .map(|c| c.id)
        .collect();
    let twists: Vec<usize> = d
        .components()
        .iter()
        .filter(|c| c.role == Role::Twist)
        .map(|c| c.id)
        .collect();
    let mut checks = Vec::new();

    let mut bad: Vec<usize> = bindings
        .iter()
        .copied()
        .filter(|&u| knots.iter().map(|&k| d.linking(u, k).abs()).sum::<i64>() != 1)
        .collect();
    checks.push(ConditionCheck {
        name: "(1) each binding links the unknotted image once".into(),
        pass: bad.is_empty(),
        offenders: std::mem::take(&mut bad),
    });

    for (x, &u) in bindings.iter().enumerate() {
        for &v in &bindings[x + 1..] {
            if d.linking(u, v) != 0 {
                bad.push(u);
                bad.push(v);
            }
        }
    }
    bad.dedup();
    checks.push(ConditionCheck {
        name: "(2) bindings pairwise unlinked".into(),
        pass: bad.is_empty(),
        offenders: std::mem::take(&mut bad),
    });

    for &x in &twists {
        let f = d.component(x).unwrap().framing;
        let framing_ok = if r.positive_mode { f == -1 } else { f.abs() == 1 };
        let links_image: i64 = knots.iter().map(|&k| d.linking(x, k)).sum();
        if !framing_ok || links_image != 0 {
            bad.push(x);
        }
    }
    checks.push(ConditionCheck {
        name: if r.positive_mode {
            "(3) twist curves framed -1 and unlinked from the image".into()
        } else {
            "(3) twist curves framed ±1 and unlinked from the image".into()
        },
        pass: bad.is_empty(),
        offenders: std::mem::take(&mut bad),
    });

    for &x in &twists {
        let support: Vec<usize> = bindings
            .iter()
            .copied()
            .filter(|&u| d.linking(x, u) != 0)
            .collect();
        let consistent = support.iter().all(|&u| d.linking(x, u).abs() == 1);
        if support.is_empty() || !consistent || d.enclosure(x) != support.as_slice() {
            bad.push(x);
        }
    }
    checks.push(ConditionCheck {
        name: "(4) twist curves encircle a nonempty binding set matching their linking".into(),
        pass: bad.is_empty(),
        offenders: std::mem::take(&mut bad),
    });

    bad = bindings
        .iter()
        .copied()
        .filter(|&u| d.component(u).unwrap().framing != 0)
        .collect();
    checks.push(ConditionCheck {
        name: "(5) bindings framed zero".into(),
        pass: bad.is_empty(),
        offenders: std::mem::take(&mut bad),
    });

    for (x, &a) in knots.iter().enumerate() {
        for &b in &knots[x + 1..] {
            if d.linking(a, b) != 0 {
                bad.push(a);
                bad.push(b);
            }
        }
    }
    bad.dedup();
    checks.push(ConditionCheck {
        name: "link components pairwise unlinked".into(),
        pass: bad.is_empty(),
        offenders: std::mem::take(&mut bad),
    });

    bad = d
        .components()
        .iter()
        .filter(|c| c.role == Role::Ambient && c.framing.abs() != 1)
        .map(|c| c.id)
        .collect();
    checks.push(ConditionCheck {
        name: "ambient curves framed ±1".into(),
        pass: bad.is_empty(),
        offenders: std::mem::take(&mut bad),
    });

    // Twist bookkeeping: the ring event of each removed occurrence must
    // carry the opposite sign and wind through the link components with
    // total weight o_i + o_j, so its full twist cancels the occurrence.
    // Rings may also enclose extra strands in cancelling pairs, so the
    // total weight is 0 or ±2 in every case.
    let initial_knots: Vec<usize> = r
        .initial
        .components()
        .iter()
        .filter(|c| !c.role.is_framed())
        .map(|c| c.id)
        .collect();
    for t in &r.trace {
        let ring = r.events.iter().find(|e| e.new_id == t.ring_id && !e.down);
        let ok = match ring {
            Some(e) => {
                let wk: i64 = e
                    .threaded
                    .iter()
                    .filter(|(id, _)| initial_knots.contains(id))
                    .map(|&(_, l)| l)
                    .sum();
                e.sign == -t.sign && wk.abs() <= 2 && wk.rem_euclid(2) == 0
            }
            None => false,
        };
        if !ok {
            bad.push(t.ring_id);
        }
    }
    bad.dedup();
    checks.push(ConditionCheck {
        name: "each occurrence has an opposite-sign cancelling ring".into(),
        pass: bad.is_empty(),
        offenders: bad,
    });

    ConditionsReport { checks }
}

// --- unknotting compiler -------------------------------------------------

/// One event of a gadget template, before instantiation. `prev` threads
/// earlier events of the same gadget (by local index); `kstrands` threads
/// the two strands of the occurrence (0 = strand i, 1 = strand j) with
/// signed multiplicities.
struct TemplateEvent {
    sign: i64,
    prev: Vec<(usize, i64)>,
    kstrands: Vec<(u8, i64)>,
    role: Role,
    ring: bool,
}

/// Gadget for an occurrence A_ij^ε. `oi`, `oj` are the strand orientations
/// at the twist site; parallel strands have oi = oj, antiparallel oi = -oj.
/// In positive mode every emitted twist curve is framed −1.
fn gadget(eps: i64, oi: i64, oj: i64, positive: bool) -> Vec<TemplateEvent> {
    let tau = oi + oj;
    if tau == 0 {
        if positive && eps == -1 {
            // four unknots; the +1 ring is absorbed by the two bindings
            return vec![
                TemplateEvent {
                    sign: 1,
                    prev: vec![],
                    kstrands: vec![(0, oi), (1, -oi)],
                    role: Role::Binding,
                    ring: true,
                },
                TemplateEvent {
                    sign: 1,
                    prev: vec![(0, 1)],
                    kstrands: vec![(0, -oi)],
                    role: Role::Binding,
                    ring: false,
                },
                TemplateEvent {
                    sign: -1,
                    prev: vec![(0, -1), (1, -1)],
                    kstrands: vec![],
                    role: Role::Twist,
                    ring: false,
                },
                TemplateEvent {
                    sign: -1,
                    prev: vec![(0, -1)],
                    kstrands: vec![],
                    role: Role::Twist,
                    ring: false,
                },
            ];
        }
        // one binding through strand i, one ring of the opposite sign
        // around both strands and through the binding
        return vec![
            TemplateEvent {
                sign: eps,
                prev: vec![],
                kstrands: vec![(0, 1)],
                role: Role::Binding,
                ring: false,
            },
            TemplateEvent {
                sign: -eps,
                prev: vec![(0, 1)],
                kstrands: vec![(0, eps), (1, -eps)],
                role: Role::Twist,
                ring: true,
            },
        ];
    }
    debug_assert!(
        !(positive && eps == 1),
        "positive parallel occurrences are rewritten by the compiler, not gadgeted directly"
    );
    if positive {
        // all twist curves framed -1: the +1 ring becomes a binding, three
        // more bindings absorb its winding, four -1 curves fix the framings
        return vec![
            TemplateEvent {
                sign: 1,
                prev: vec![],
                kstrands: vec![(0, 1), (1, 1)],
                role: Role::Binding,
                ring: true,
            },
            TemplateEvent {
                sign: 1,
                prev: vec![(0, 1)],
                kstrands: vec![(0, -1)],
                role: Role::Binding,
                ring: false,
            },
            TemplateEvent {
                sign: 1,
                prev: vec![(1, 1)],
                kstrands: vec![(1, 1)],
                role: Role::Binding,
                ring: false,
            },
            TemplateEvent {
                sign: 1,
                prev: vec![(1, 1)],
                kstrands: vec![(0, 1)],
                role: Role::Binding,
                ring: false,
            },
            TemplateEvent {
                sign: -1,
                prev: vec![(1, 1), (3, 1)],
                kstrands: vec![],
                role: Role::Twist,
                ring: false,
            },
            TemplateEvent {
                sign: -1,
                prev: vec![(1, 1), (2, 1)],
                kstrands: vec![],
                role: Role::Twist,
                ring: false,
            },
            TemplateEvent {
                sign: -1,
                prev: vec![(0, 1)],
                kstrands: vec![],
                role: Role::Twist,
                ring: false,
            },
            TemplateEvent {
                sign: -1,
                prev: vec![(0, 1), (1, 1)],
                kstrands: vec![],
                role: Role::Twist,
                ring: false,
            },
        ];
    }
    // the -ε ring stays as a page curve (ending framed +ε); one binding per
    // strand absorbs its winding and two -ε curves fix the framings
    vec![
        TemplateEvent {
            sign: -eps,
            prev: vec![],
            kstrands: vec![(0, -eps), (1, -eps)],
            role: Role::Twist,
            ring: true,
        },
        TemplateEvent {
            sign: eps,
            prev: vec![(0, 1)],
            kstrands: vec![(0, 1)],
            role: Role::Binding,
            ring: false,
        },
        TemplateEvent {
            sign: eps,
            prev: vec![(0, 1)],
            kstrands: vec![(1, 1)],
            role: Role::Binding,
            ring: false,
        },
        TemplateEvent {
            sign: -eps,
            prev: vec![(2, 1)],
            kstrands: vec![],
            role: Role::Twist,
            ring: false,
        },
        TemplateEvent {
            sign: -eps,
            prev: vec![(1, 1)],
            kstrands: vec![],
            role: Role::Twist,
            ring: false,
        },
    ]
}

/// Strand orientations of a pure plat: odd positions run up, even down.
/// Fails if some cap joins two positions of the same parity, since then no
/// consistent orientation assigns directions by position.
fn strand_orientations(p: &PlatPresentation) -> Result<Vec<i64>> {
    let n = p.strands();
    for &(a, b) in p.top_pairing().iter().chain(p.bottom_pairing().iter()) {
        if a % 2 == b % 2 {
            return Err(Error::Kirby(format!(
                "cap ({a},{b}) joins same-parity positions; cannot orient strands"
            )));
        }
    }
    Ok((1..=n).map(|s| if s % 2 == 1 { 1 } else { -1 }).collect())
}

/// Instantiates a gadget template on the strand pair (i, j), blowing up
/// its events in order. Returns the created ids and the ring event id.
#[allow(clippy::too_many_arguments)]
fn emit_gadget(
    diagram: &mut FramedLinkDiagram,
    events: &mut Vec<BlowUpEvent>,
    next_id: &mut usize,
    comp_of: &[usize],
    i: usize,
    j: usize,
    eps: i64,
    oi: i64,
    oj: i64,
    positive: bool,
) -> Result<(Vec<usize>, usize)> {
    let tmpl = gadget(eps, oi, oj, positive);
    let base = *next_id;
    let mut ids = Vec::new();
    let mut ring_id = base;
    for te in &tmpl {
        let mut threaded: Vec<(usize, i64)> = Vec::new();
        let mut klam: BTreeMap<usize, i64> = BTreeMap::new();
        for &(which, l) in &te.kstrands {
            let strand = if which == 0 { i } else { j };
            *klam.entry(comp_of[strand - 1]).or_insert(0) += l;
        }
        for (c, l) in klam {
            if l != 0 {
                threaded.push((c, l));
            }
        }
        for &(local, l) in &te.prev {
            threaded.push((base + local, l));
        }
        let ev = BlowUpEvent {
            sign: te.sign,
            threaded,
            new_id: *next_id,
            role: te.role,
            down: false,
        };
        if te.ring {
            ring_id = *next_id;
        }
        *diagram = diagram.blow_up(&ev)?;
        events.push(ev);
        ids.push(*next_id);
        *next_id += 1;
    }
    Ok((ids, ring_id))
}

fn compile(word: &PureGeneratorWord, plat: &PlatPresentation, positive: bool) -> Result<UnknottingResult> {
    if word.strands() != plat.strands() {
        return Err(Error::Kirby(format!(
            "generator word on {} strands but plat has {}",
            word.strands(),
            plat.strands()
        )));
    }
    if !plat.is_pure_braided() {
        return Err(Error::Kirby("plat braid is not pure; purify it first".into()));
    }
    let orient = strand_orientations(plat)?;
    let comp_of = plat.strand_components();
    let ncomp = plat.component_count();

    let mut initial = FramedLinkDiagram::new();
    for c in 0..ncomp {
        initial.add_component(c, Role::Knot, 0)?;
    }
    let slk = word.expand().strand_linking()?;
    let n = plat.strands();
    for p in 1..=n {
        for q in (p + 1)..=n {
            let (a, b) = (comp_of[p - 1], comp_of[q - 1]);
            if a != b {
                initial.add_linking(a, b, slk[p - 1][q - 1] * orient[p - 1] * orient[q - 1]);
            }
        }
    }

    let mut diagram = initial.clone();
    let mut events: Vec<BlowUpEvent> = Vec::new();
    let mut trace: Vec<GeneratorTrace> = Vec::new();
    let mut next_id = ncomp;
    for f in word.factors() {
        let eps = if f.exp > 0 { 1 } else { -1 };
        for _ in 0..f.exp.unsigned_abs() {
            let (oi, oj) = (orient[f.i - 1], orient[f.j - 1]);
            let (ids, ring_id) = if positive && eps == 1 && oi == oj {
                // No all-(-1) gadget removes a positive parallel twist
                // directly. Blow up a transient -1 ring around the two
                // strands plus an opposite neighbour of each: its net
                // winding through the link is zero and the full left twist
                // it inserts cancels the occurrence, trading it for five
                // negative ones on the enclosed pairs, each removable by
                // the ordinary gadgets. Nothing threads the ring, so it
                // blows back down leaving no trace in the diagram.
                let c = if f.i % 2 == 1 { f.i + 1 } else { f.i - 1 };
                let cp = if f.j % 2 == 1 { f.j + 1 } else { f.j - 1 };
                let rid = next_id;
                let mut klam: BTreeMap<usize, i64> = BTreeMap::new();
                for &(s, w) in &[(f.i, oi), (f.j, oj), (c, -oi), (cp, -oi)] {
                    *klam.entry(comp_of[s - 1]).or_insert(0) += w;
                }
                let threaded: Vec<(usize, i64)> =
                    klam.into_iter().filter(|&(_, l)| l != 0).collect();
                let up = BlowUpEvent {
                    sign: -1,
                    threaded: threaded.clone(),
                    new_id: rid,
                    role: Role::Twist,
                    down: false,
                };
                diagram = diagram.blow_up(&up)?;
                events.push(up);
                next_id += 1;
                let mut ids = vec![rid];
                for &(a, b) in &[(f.i, c), (f.i, cp), (f.j, c), (f.j, cp), (c, cp)] {
                    let (sub, _) = emit_gadget(
                        &mut diagram,
                        &mut events,
                        &mut next_id,
                        &comp_of,
                        a,
                        b,
                        -1,
                        orient[a - 1],
                        orient[b - 1],
                        positive,
                    )?;
                    ids.extend(sub);
                }
                diagram = diagram.blow_down(rid)?;
                events.push(BlowUpEvent {
                    sign: -1,
                    threaded,
                    new_id: rid,
                    role: Role::Twist,
                    down: true,
                });
                (ids, rid)
            } else {
                emit_gadget(
                    &mut diagram,
                    &mut events,
                    &mut next_id,
                    &comp_of,
                    f.i,
                    f.j,
                    eps,
                    oi,
                    oj,
                    positive,
                )?
            };
            trace.push(GeneratorTrace {
                i: f.i,
                j: f.j,
                sign: eps,
                event_ids: ids,
                ring_id,
            });
        }
    }

    for c in 0..ncomp {
        diagram.set_role(c, Role::Unknotted)?;
    }
    assign_enclosures(&mut diagram)?;

    Ok(UnknottingResult {
        initial,
        diagram,
        events,
        trace,
        positive_mode: positive,
        bands: Vec::new(),
    })
}

fn assign_enclosures(d: &mut FramedLinkDiagram) -> Result<()> {
    let twists: Vec<usize> = d
        .components()
        .iter()
        .filter(|c| c.role == Role::Twist)
        .map(|c| c.id)
        .collect();
    let bindings: Vec<usize> = d
        .components()
        .iter()
        .filter(|c| c.role == Role::Binding)
        .map(|c| c.id)
        .collect();
    for x in twists {
        let inside: Vec<usize> = bindings
            .iter()
            .copied()
            .filter(|&u| d.linking(x, u) != 0)
            .collect();
        d.set_enclosure(x, inside)?;
    }
    Ok(())
}

/// Unknots the plat link by blowing up one gadget per generator occurrence
/// of the combed word. The output diagram satisfies conditions (1)–(5) and
/// presents S³ over the auxiliary unknots.
pub fn compile_unknotting(word: &PureGeneratorWord, plat: &PlatPresentation) -> Result<UnknottingResult> {
    compile(word, plat, false)
}

/// Same as `compile_unknotting` but every emitted twist curve is framed
/// −1, so the open book downstream has only positive Dehn twists.
pub fn positive_monodromy_compile(
    word: &PureGeneratorWord,
    plat: &PlatPresentation,
) -> Result<UnknottingResult> {
    compile(word, plat, true)
}

/// Connect-sums the unknotted link components into a single unknot by
/// recording bands. Requires the components to be pairwise unlinked (which
/// the compiler guarantees). Identity on knots.
pub fn band_connect(r: &UnknottingResult) -> Result<UnknottingResult> {
    let knots = r.knot_ids();
    if knots.len() <= 1 {
        return Ok(r.clone());
    }
    for (x, &a) in knots.iter().enumerate() {
        for &b in &knots[x + 1..] {
            if r.diagram.linking(a, b) != 0 {
                return Err(Error::Kirby(format!(
                    "components {a} and {b} are linked; cannot band into an unknot"
                )));
            }
        }
    }
    let target = knots[0];
    let bands: Vec<(usize, usize)> = knots[1..].iter().map(|&o| (target, o)).collect();
    let diagram = band_view(&r.diagram, &bands)?;
    let mut out = r.clone();
    out.diagram = diagram;
    out.bands = bands;
    Ok(out)
}

/// Adjoins split ±1-framed ambient surgery curves, turning the S³ result
/// into a presentation of the surgered manifold. Each curve later becomes
/// a page curve via one open book stabilization.
pub fn embed_in_manifold(r: &UnknottingResult, ambient: &[i64]) -> Result<UnknottingResult> {
    for (k, &f) in ambient.iter().enumerate() {
        if f.abs() != 1 {
            return Err(Error::Kirby(format!(
                "ambient curve {k} has framing {f}, must be ±1"
            )));
        }
    }
    let mut out = r.clone();
    let mut next = out
        .diagram
        .components()
        .iter()
        .map(|c| c.id + 1)
        .max()
        .unwrap_or(0);
    for &f in ambient {
        out.initial.add_component(next, Role::Ambient, f)?;
        out.diagram.add_component(next, Role::Ambient, f)?;
        next += 1;
    }
    Ok(out)
}

// --- integer matrix routines ----------------------------------------------

fn det_i128(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    // Bareiss fraction-free elimination
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&r| a[r][k] != 0);
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    if n == 0 {
        return 1;
    }
    sign * a[n - 1][n - 1]
}

/// Nontrivial diagonal entries of the Smith normal form, ascending by
/// divisibility, zeros last.
fn smith_divisors(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut divisors = Vec::new();
    let mut top = 0usize;
    while top < n {
        // find a nonzero pivot
        let mut piv = None;
        'find: for i in top..n {
            for j in top..n {
                if a[i][j] != 0 {
                    piv = Some((i, j));
                    break 'find;
                }
            }
        }
        let (pi, pj) = match piv {
            Some(p) => p,
            None => break,
        };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(top, pj);
        }
        loop {
            // reduce column then row until the pivot divides everything
            let mut clean = true;
            for i in top + 1..n {
                while a[i][top] != 0 {
                    let q = a[i][top].div_euclid(a[top][top]);
                    for j in top..n {
                        a[i][j] -= q * a[top][j];
                    }
                    if a[i][top] != 0 {
                        for j in top..n {
                            let t = a[top][j];
                            a[top][j] = a[i][j];
                            a[i][j] = t;
                        }
                        clean = false;
                    }
                }
            }
            for j in top + 1..n {
                while a[top][j] != 0 {
                    let q = a[top][j].div_euclid(a[top][top]);
                    for i in top..n {
                        a[i][j] -= q * a[i][top];
                    }
                    if a[top][j] != 0 {
                        for i in top..n {
                            let t = a[i][top];
                            a[i][top] = a[i][j];
                            a[i][j] = t;
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        divisors.push(a[top][top].abs());
        top += 1;
    }
    // entries not reached are zero rows: free factors
    let zeros = n - top;
    // enforce divisibility chain
    let mut ds: Vec<i128> = divisors;
    let len = ds.len();
    loop {
        let mut changed = false;
        for i in 0..len.saturating_sub(1) {
            if ds[i + 1] % ds[i] != 0 {
                let g = gcd(ds[i], ds[i + 1]);
                let l = ds[i] / g * ds[i + 1];
                ds[i] = g;
                ds[i + 1] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<i64> = ds.into_iter().filter(|&d| d != 1).map(|d| d as i64).collect();
    out.extend(std::iter::repeat(0).take(zeros));
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{comb, BraidWord};
    use crate::plat::{closure_to_plat, purify, shift};

    fn diagram(text: &str) -> FramedLinkDiagram {
        FramedLinkDiagram::parse(text).unwrap()
    }

    #[test]
    fn isolated_blow_up() {
        let d = FramedLinkDiagram::new();
        let e = BlowUpEvent {
            sign: -1,
            threaded: vec![],
            new_id: 0,
            role: Role::Twist,
            down: false,
        };
        let d2 = d.blow_up(&e).unwrap();
        assert_eq!(d2.components().len(), 1);
        assert_eq!(d2.component(0).unwrap().framing, -1);
        assert_eq!(d2.homology(), Vec::<i64>::new());
    }

    #[test]
    fn double_threading_updates() {
        let mut d = FramedLinkDiagram::new();
        d.add_component(0, Role::Binding, 0).unwrap();
        let e = BlowUpEvent {
            sign: -1,
            threaded: vec![(0, 2)],
            new_id: 1,
            role: Role::Twist,
            down: false,
        };
        let d2 = d.blow_up(&e).unwrap();
        assert_eq!(d2.component(0).unwrap().framing, -4);
        assert_eq!(d2.linking(0, 1), 2);
        assert_eq!(d2.blow_down(1).unwrap(), d);
    }

    #[test]
    fn blow_down_hopf_pair() {
        let d = diagram("component 0 L0 0\ncomponent 1 Lpm -1\nlk 0 1 1\n");
        let d2 = d.blow_down(1).unwrap();
        assert_eq!(d2.component(0).unwrap().framing, 1);
        assert_eq!(d2.components().len(), 1);
    }

    #[test]
    fn blow_down_requires_unit_framing() {
        let d = diagram("component 0 L0 0\n");
        assert!(d.blow_down(0).is_err());
    }

    #[test]
    fn det_invariant_under_blow_up() {
        let d = diagram("component 0 L0 2\ncomponent 1 Lpm -1\nlk 0 1 1\n");
        let before = d.framed_det().abs();
        let e = BlowUpEvent {
            sign: 1,
            threaded: vec![(0, 1), (1, -2)],
            new_id: 2,
            role: Role::Twist,
            down: false,
        };
        let d2 = d.blow_up(&e).unwrap();
        assert_eq!(d2.framed_det().abs(), before);
    }

    #[test]
    fn knot_components_not_framed() {
        let mut d = FramedLinkDiagram::new();
        d.add_component(0, Role::Knot, 0).unwrap();
        let e = BlowUpEvent {
            sign: 1,
            threaded: vec![(0, 1)],
            new_id: 1,
            role: Role::Binding,
            down: false,
        };
        let d2 = d.blow_up(&e).unwrap();
        assert_eq!(d2.component(0).unwrap().framing, 0);
        assert_eq!(d2.linking(0, 1), 1);
        assert_eq!(d2.framed_ids(), vec![1]);
    }

    #[test]
    fn homology_examples() {
        assert_eq!(FramedLinkDiagram::new().homology(), Vec::<i64>::new());
        let u = diagram("component 0 L0 0\n");
        assert_eq!(u.homology(), vec![0]);
        let hopf = diagram("component 0 L0 0\ncomponent 1 Lpm -1\nlk 0 1 1\n");
        assert_eq!(hopf.homology(), Vec::<i64>::new());
        let lens = diagram("component 0 LM 5\n");
        assert_eq!(lens.homology(), vec![5]);
    }

    #[test]
    fn smith_divisor_chain() {
        // diag(2, 3) has cyclic homology Z/6
        let m = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(smith_divisors(&m), vec![6]);
        let m = vec![vec![2, 0], vec![0, 4]];
        assert_eq!(smith_divisors(&m), vec![2, 4]);
    }

    #[test]
    fn diagram_text_round_trip() {
        let d = diagram(
            "component 0 UK -\ncomponent 1 L0 0\ncomponent 2 Lpm -1\nlk 0 1 1\nlk 1 2 -1\nenclose 2: 1\n",
        );
        let again = FramedLinkDiagram::parse(&d.render()).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn event_text_round_trip() {
        let e = BlowUpEvent {
            sign: -1,
            threaded: vec![(0, 2), (3, -1)],
            new_id: 7,
            role: Role::Twist,
            down: false,
        };
        let parsed = parse_events(&render_events(&[e.clone()])).unwrap();
        assert_eq!(parsed, vec![e]);
    }

    fn knot_pipeline(closure: &str, strands: usize, positive: bool) -> UnknottingResult {
        let b = BraidWord::parse(closure, Some(strands)).unwrap();
        let plat = shift(&closure_to_plat(&b).unwrap()).unwrap();
        let (pure, _log) = purify(&plat).unwrap();
        let word = comb(pure.braid()).unwrap();
        let r = if positive {
            positive_monodromy_compile(&word, &pure).unwrap()
        } else {
            compile_unknotting(&word, &pure).unwrap()
        };
        r
    }

    #[test]
    fn empty_word_gives_bare_unknot() {
        let pure = crate::plat::PlatPresentation::with_pairings(
            BraidWord::identity(2),
            vec![(1, 2)],
            vec![(2, 1)],
            true,
        )
        .unwrap();
        let word = comb(pure.braid()).unwrap();
        let r = compile_unknotting(&word, &pure).unwrap();
        assert_eq!(r.diagram.components().len(), 1);
        assert_eq!(r.diagram.components()[0].role, Role::Unknotted);
        assert!(check_conditions(&r).all_pass());
        assert_eq!(r.diagram.homology(), Vec::<i64>::new());
        r.verify_replay().unwrap();
    }

    #[test]
    fn trefoil_compiles_with_certificates() {
        let r = knot_pipeline("1 1 1", 2, false);
        let rep = check_conditions(&r);
        assert!(rep.all_pass(), "{}", rep.render());
        assert_eq!(r.diagram.homology(), Vec::<i64>::new());
        r.verify_replay().unwrap();
    }

    #[test]
    fn figure_eight_compiles_with_certificates() {
        for positive in [false, true] {
            let r = knot_pipeline("-2 1 -2 1", 3, positive);
            let rep = check_conditions(&r);
            assert!(rep.all_pass(), "{}", rep.render());
            assert_eq!(r.diagram.homology(), Vec::<i64>::new());
            r.verify_replay().unwrap();
            let bindings = r
                .diagram
                .components()
                .iter()
                .filter(|c| c.role == Role::Binding)
                .count();
            assert!(bindings > 0);
        }
    }

    #[test]
    fn positive_mode_has_no_plus_one_twists() {
        for word in ["1 1 1", "-1 -1 -1", "1 -2 1 -2", "2 2 1 1"] {
            let strands = 3;
            let r = knot_pipeline(word, strands, true);
            for c in r.diagram.components() {
                if c.role == Role::Twist {
                    assert_eq!(c.framing, -1, "component {} in '{}'", c.id, word);
                }
            }
            assert!(check_conditions(&r).all_pass());
        }
    }

    #[test]
    fn twist_curves_sit_on_pages() {
        // what the open book layer relies on: twist curves are pairwise
        // unlinked (distinct pages) and link each binding at most once
        // (embedded curves around punctures)
        for positive in [false, true] {
            for (word, strands) in [("1 1 1", 2), ("-2 1 -2 1", 3), ("2 2 1 1", 3)] {
                let r = knot_pipeline(word, strands, positive);
                let twists: Vec<usize> = r
                    .diagram
                    .components()
                    .iter()
                    .filter(|c| c.role == Role::Twist)
                    .map(|c| c.id)
                    .collect();
                let bindings: Vec<usize> = r
                    .diagram
                    .components()
                    .iter()
                    .filter(|c| c.role == Role::Binding)
                    .map(|c| c.id)
                    .collect();
                let knots = r.knot_ids();
                for (x, &a) in twists.iter().enumerate() {
                    for &b in &twists[x + 1..] {
                        assert_eq!(r.diagram.linking(a, b), 0, "twists {a},{b} in '{word}'");
                    }
                    // a page curve links every enclosed binding with the
                    // binding's piercing sign, up to one overall flip
                    let mut ratios = Vec::new();
                    for &u in &bindings {
                        let l = r.diagram.linking(a, u);
                        assert!(l.abs() <= 1, "twist {a} binding {u}");
                        if l != 0 {
                            let sigma: i64 = knots.iter().map(|&k| r.diagram.linking(u, k)).sum();
                            ratios.push(l * sigma);
                        }
                    }
                    ratios.dedup();
                    assert!(ratios.len() <= 1, "twist {a} mixes piercing signs in '{word}'");
                }
            }
        }
    }

    #[test]
    fn positive_parallel_occurrence_uses_transient_ring() {
        // "2 2 1 1" combs to a word with positive parallel occurrences, so
        // the positive compile must blow up and back down at least one ring
        let r = knot_pipeline("2 2 1 1", 3, true);
        let downs: Vec<&BlowUpEvent> = r.events.iter().filter(|e| e.down).collect();
        assert!(!downs.is_empty());
        for d in &downs {
            assert_eq!(d.sign, -1);
            // the ring's net winding through the link is zero
            let knots = r.initial.components();
            let wk: i64 = d
                .threaded
                .iter()
                .filter(|(id, _)| knots.iter().any(|c| c.id == *id))
                .map(|&(_, l)| l)
                .sum();
            assert_eq!(wk, 0);
            // and it is absent from the final diagram
            assert!(r.diagram.component(d.new_id).is_none());
        }
        assert!(check_conditions(&r).all_pass());
    }

    #[test]
    fn injected_fault_is_reported() {
        let mut r = knot_pipeline("1 1 1", 2, false);
        let binding = r
            .diagram
            .components()
            .iter()
            .find(|c| c.role == Role::Binding)
            .unwrap()
            .id;
        r.diagram.set_framing(binding, 2).unwrap();
        let rep = check_conditions(&r);
        assert!(!rep.all_pass());
        let c5 = rep.checks.iter().find(|c| c.name.starts_with("(5)")).unwrap();
        assert!(!c5.pass);
        assert_eq!(c5.offenders, vec![binding]);
    }

    #[test]
    fn hopf_link_bands_into_unknot() {
        let r = knot_pipeline("1 1", 2, false);
        assert_eq!(r.initial.components().len(), 2);
        let banded = band_connect(&r).unwrap();
        assert_eq!(banded.knot_ids().len(), 1);
        assert_eq!(banded.bands.len(), 1);
        let rep = check_conditions(&banded);
        assert!(rep.all_pass(), "{}", rep.render());
        assert_eq!(banded.diagram.homology(), Vec::<i64>::new());
        banded.verify_replay().unwrap();
    }

    #[test]
    fn unlink_bands_into_unknot() {
        // closure of the identity braid on 2 strands: 2-component unlink
        let b = BraidWord::identity(2);
        let plat = shift(&closure_to_plat(&b).unwrap()).unwrap();
        let (pure, _) = purify(&plat).unwrap();
        let word = comb(pure.braid()).unwrap();
        let r = compile_unknotting(&word, &pure).unwrap();
        let banded = band_connect(&r).unwrap();
        assert!(check_conditions(&banded).all_pass());
    }

    #[test]
    fn ambient_embedding() {
        let r = knot_pipeline("1 1 1", 2, false);
        let m = embed_in_manifold(&r, &[-1]).unwrap();
        assert!(check_conditions(&m).all_pass());
        assert_eq!(m.diagram.homology(), Vec::<i64>::new());
        let ambient_id = m
            .diagram
            .components()
            .iter()
            .find(|c| c.role == Role::Ambient)
            .unwrap()
            .id;
        let back = m.diagram.blow_down(ambient_id).unwrap();
        assert_eq!(back, r.diagram);
        assert!(embed_in_manifold(&r, &[0]).is_err());
    }

    #[test]
    fn compile_is_deterministic() {
        let a = knot_pipeline("-2 1 -2 1", 3, false);
        let b = knot_pipeline("-2 1 -2 1", 3, false);
        assert_eq!(render_events(&a.events), render_events(&b.events));
        assert_eq!(a.diagram.render(), b.diagram.render());
    }
}
