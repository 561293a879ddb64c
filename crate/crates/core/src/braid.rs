//! Braid-group words, strand permutations, pure braid generators and
//! combing into the standard generators `A_ij`.
//!
//! The equality oracle throughout is the Artin action on the free group:
//! the action is faithful, so two words are equal in the braid group iff
//! their actions agree on every generator.

use crate::free::{FreeEndo, FreeWord};
use crate::{Error, Result};

/// One letter of a braid word: the generator `σ_index` with exponent ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    /// Generator index, 1-based, in `1..strands`.
    pub index: usize,
    /// +1 or -1.
    pub sign: i8,
}

impl Letter {
    pub fn new(index: usize, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        Letter { index, sign }
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            sign: -self.sign,
        }
    }
}

/// A word in the braid group `B_n` on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn identity(strands: usize) -> Self {
        assert!(strands >= 1);
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(Error::IndexOutOfRange {
                    index: l.index,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parse whitespace-separated signed integers: token `t` means
    /// `σ_|t|` with the sign of `t`. Strand count is `max|t| + 1` when not
    /// given explicitly.
    pub fn parse(text: &str, strands: Option<usize>) -> Result<Self> {
        let mut letters = Vec::new();
        let mut max_index = 0usize;
        for tok in text.split_whitespace() {
            let t: i64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad braid token {tok:?}")))?;
            if t == 0 {
                return Err(Error::Parse("zero is not a braid generator".into()));
            }
            let index = t.unsigned_abs() as usize;
            max_index = max_index.max(index);
            letters.push(Letter::new(index, if t > 0 { 1 } else { -1 }));
        }
        let n = match strands {
            Some(n) => n,
            None => max_index + 1,
        };
        BraidWord::new(n.max(1), letters)
    }

    pub fn render(&self) -> String {
        self.letters
            .iter()
            .map(|l| (l.sign as i64 * l.index as i64).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Cancel adjacent `σ_i σ_i^{-1}` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last().is_some_and(|p| *p == l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands, "strand counts differ");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// View the same word in a larger braid group.
    pub fn embed(&self, strands: usize) -> BraidWord {
        assert!(strands >= self.strands);
        BraidWord {
            strands,
            letters: self.letters.clone(),
        }
    }

    /// Start-position to end-position bijection, reading letters top to
    /// bottom. Exponent signs do not matter.
    pub fn permutation(&self) -> StrandPermutation {
        let n = self.strands;
        // at[p] = strand currently at position p (0-based positions).
        let mut at: Vec<usize> = (0..n).collect();
        for l in &self.letters {
            at.swap(l.index - 1, l.index);
        }
        let mut map = vec![0usize; n];
        for (pos, &strand) in at.iter().enumerate() {
            map[strand] = pos + 1;
        }
        StrandPermutation { map }
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().is_identity()
    }

    /// The Artin action on the free group of rank `strands`:
    /// `σ_i: x_i ↦ x_i x_{i+1} x_i^{-1}, x_{i+1} ↦ x_i`.
    ///
    /// Composition convention: `artin_action(uv)(x) = v(u(x))`.
    pub fn artin_action(&self) -> FreeEndo {
        let mut endo = FreeEndo::identity(self.strands);
        for l in &self.letters {
            endo = endo.then(&letter_endo(self.strands, *l));
        }
        endo
    }

    /// Symmetric matrix whose (i, j) entry is half the signed crossing
    /// count between strands i and j. Defined for pure braids only (the
    /// abelianization of the pure braid group).
    pub fn strand_linking(&self) -> Result<Vec<Vec<i64>>> {
        if !self.is_pure() {
            return Err(Error::NotPure(
                "strand_linking requires a pure braid".into(),
            ));
        }
        let n = self.strands;
        let mut at: Vec<usize> = (0..n).collect();
        let mut cross = vec![vec![0i64; n]; n];
        for l in &self.letters {
            let (s, t) = (at[l.index - 1], at[l.index]);
            cross[s][t] += l.sign as i64;
            cross[t][s] += l.sign as i64;
            at.swap(l.index - 1, l.index);
        }
        for row in &mut cross {
            for v in row.iter_mut() {
                debug_assert!(*v % 2 == 0, "pure braid crossing counts are even");
                *v /= 2;
            }
        }
        Ok(cross)
    }

    /// Remove the strand that starts (and, for a pure braid, ends) at
    /// position `pos` (1-based), renumbering the remaining strands.
    pub fn delete_strand(&self, pos: usize) -> BraidWord {
        assert!(pos >= 1 && pos <= self.strands);
        let mut p = pos; // current position of the deleted strand
        let mut letters = Vec::new();
        for l in &self.letters {
            if l.index == p {
                p += 1;
            } else if l.index + 1 == p {
                p -= 1;
            } else {
                let index = if l.index > p { l.index - 1 } else { l.index };
                letters.push(Letter::new(index, l.sign));
            }
        }
        BraidWord {
            strands: self.strands - 1,
            letters,
        }
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn letter_endo(rank: usize, l: Letter) -> FreeEndo {
    let i = l.index as i32;
    let mut images: Vec<FreeWord> = (1..=rank as i32).map(FreeWord::letter).collect();
    if l.sign > 0 {
        images[(i - 1) as usize] = FreeWord::from_letters([i, i + 1, -i]);
        images[i as usize] = FreeWord::letter(i);
    } else {
        images[(i - 1) as usize] = FreeWord::letter(i + 1);
        images[i as usize] = FreeWord::from_letters([-(i + 1), i, i + 1]);
    }
    FreeEndo::new(images)
}

/// A bijection on `{1..n}` sending start position to end position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandPermutation {
    map: Vec<usize>, // map[i-1] = image of i, 1-based values
}

impl StrandPermutation {
    pub fn identity(n: usize) -> Self {
        StrandPermutation {
            map: (1..=n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn apply_inverse(&self, j: usize) -> usize {
        self.map.iter().position(|&v| v == j).unwrap() + 1
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// `self.compose(other)` is "self, then other".
    pub fn compose(&self, other: &StrandPermutation) -> StrandPermutation {
        assert_eq!(self.degree(), other.degree());
        StrandPermutation {
            map: (1..=self.degree()).map(|i| other.apply(self.apply(i))).collect(),
        }
    }
}

/// The standard pure braid generator
/// `A_ij = (σ_{j-1} ⋯ σ_{i+1}) σ_i^2 (σ_{i+1}^{-1} ⋯ σ_{j-1}^{-1})`.
pub fn pure_generator(i: usize, j: usize, n: usize) -> Result<BraidWord> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::BadGeneratorIndices { i, j, n });
    }
    let mut letters = Vec::new();
    for k in ((i + 1)..j).rev() {
        letters.push(Letter::new(k, 1));
    }
    letters.push(Letter::new(i, 1));
    letters.push(Letter::new(i, 1));
    for k in (i + 1)..j {
        letters.push(Letter::new(k, -1));
    }
    BraidWord::new(n, letters)
}

/// One factor `A_ij^k` of a word in the standard pure braid generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PureFactor {
    pub i: usize,
    pub j: usize,
    pub exp: i64,
}

/// A word in the pure braid generators `A_ij`, `1 ≤ i < j ≤ strands`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureGeneratorWord {
    strands: usize,
    factors: Vec<PureFactor>,
}

impl PureGeneratorWord {
    pub fn new(strands: usize, factors: Vec<PureFactor>) -> Result<Self> {
        for f in &factors {
            if !(1 <= f.i && f.i < f.j && f.j <= strands) {
                return Err(Error::BadGeneratorIndices {
                    i: f.i,
                    j: f.j,
                    n: strands,
                });
            }
            if f.exp == 0 {
                return Err(Error::Parse("zero exponent in generator word".into()));
            }
        }
        Ok(PureGeneratorWord { strands, factors })
    }

    pub fn empty(strands: usize) -> Self {
        PureGeneratorWord {
            strands,
            factors: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn factors(&self) -> &[PureFactor] {
        &self.factors
    }

    /// Total occurrence count with exponents counted by absolute value.
    pub fn occurrence_count(&self) -> usize {
        self.factors.iter().map(|f| f.exp.unsigned_abs() as usize).sum()
    }

    /// Expand into a plain braid word via `pure_generator`.
    pub fn expand(&self) -> BraidWord {
        let mut w = BraidWord::identity(self.strands);
        for f in &self.factors {
            let g = pure_generator(f.i, f.j, self.strands).expect("validated indices");
            let g = if f.exp < 0 { g.inverse() } else { g };
            for _ in 0..f.exp.unsigned_abs() {
                w = w.concat(&g);
            }
        }
        w
    }

    /// Text format: one factor per line, "A i j ^ k".
    pub fn render(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("A {} {} ^ {}", f.i, f.j, f.exp))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let mut factors = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 5 || toks[0] != "A" || toks[3] != "^" {
                return Err(Error::Parse(format!("bad generator line {line:?}")));
            }
            let parse_usize = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad index {s:?}")))
            };
            factors.push(PureFactor {
                i: parse_usize(toks[1])?,
                j: parse_usize(toks[2])?,
                exp: toks[4]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {:?}", toks[4])))?,
            });
        }
        PureGeneratorWord::new(strands, factors)
    }
}

/// Decompose a pure braid into the standard generators `A_ij` by iterated
/// strand straightening: pull the last strand straight, read off its
/// `A_in` factors from the Artin image of `x_n`, and recurse on the rest.
///
/// The output expands to a word with the same Artin action as the input,
/// which (by faithfulness) is equality in the braid group.
pub fn comb(w: &BraidWord) -> Result<PureGeneratorWord> {
    if !w.is_pure() {
        return Err(Error::NotPure("comb requires a pure braid".into()));
    }
    let mut factors: Vec<PureFactor> = Vec::new();
    let mut cur = w.free_reduce();
    for m in (2..=w.strands()).rev() {
        let rest = cur.delete_strand(m);
        let kernel = cur.concat(&rest.embed(m).inverse());
        let letters = straighten_last_strand(&kernel, m)?;
        for (i, sign) in letters {
            match factors.last_mut() {
                Some(f) if f.i == i && f.j == m && (f.exp > 0) == (sign > 0) => {
                    f.exp += sign as i64;
                }
                _ => factors.push(PureFactor {
                    i,
                    j: m,
                    exp: sign as i64,
                }),
            }
        }
        cur = rest;
    }
    PureGeneratorWord::new(w.strands(), factors)
}

/// Express a braid in the kernel of "forget strand m" as a word in the
/// generators `A_1m, ..., A_{m-1,m}`.
///
/// The Artin image of `x_m` under a pure braid is a conjugate
/// `C x_m C^{-1}`. Filling in the m-th puncture (killing `x_m` in the
/// conjugator) is, on the kernel, an isomorphism onto the free group on
/// `x_1, ..., x_{m-1}` that sends `A_im` to `x_i`, so the A-word is read
/// off the projected conjugator letter by letter.
fn straighten_last_strand(kernel: &BraidWord, m: usize) -> Result<Vec<(usize, i8)>> {
    debug_assert_eq!(kernel.strands(), m);
    let endo = kernel.artin_action();
    let conjugator = extract_conjugator(&endo, m)?;
    let projected = FreeWord::from_letters(
        conjugator
            .letters()
            .iter()
            .copied()
            .filter(|&l| l.unsigned_abs() as usize != m),
    );
    Ok(projected
        .letters()
        .iter()
        .map(|&l| (l.unsigned_abs() as usize, if l > 0 { 1i8 } else { -1 }))
        .collect())
}

/// The conjugator `C` in the reduced form `C x_m C^{-1}` of the Artin
/// image of `x_m`.
fn extract_conjugator(endo: &FreeEndo, m: usize) -> Result<FreeWord> {
    let image = endo.image(m);
    let len = image.len();
    let letters = image.letters();
    let mid = len / 2;
    if len % 2 == 0 || letters[mid] != m as i32 {
        return Err(Error::NotPure("Artin image of x_m is not a conjugate of x_m".into()));
    }
    for k in 0..mid {
        if letters[k] != -letters[len - 1 - k] {
            return Err(Error::NotPure("Artin image of x_m is not a conjugate of x_m".into()));
        }
    }
    Ok(FreeWord::from_letters(letters[..mid].iter().copied()))
}
