//! Reduced words and endomorphisms of finitely generated free groups.
//!
//! Words are stored fully reduced, so equality of words is equality in the
//! group. This is what makes the Artin action usable as a braid-equality
//! oracle elsewhere in the crate.

/// A reduced word in the free group on generators `x_1, x_2, ...`.
///
/// Letter `g > 0` is the generator `x_g`, letter `-g` its inverse. The
/// internal representation never contains an adjacent `g, -g` pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    /// Single-letter word `x_g` (`g > 0`) or `x_{-g}^{-1}` (`g < 0`).
    pub fn letter(g: i32) -> Self {
        assert!(g != 0, "generator index must be nonzero");
        FreeWord(vec![g])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push(&mut self, letter: i32) {
        assert!(letter != 0);
        if self.0.last() == Some(&-letter) {
            self.0.pop();
        } else {
            self.0.push(letter);
        }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// `self * w * self^{-1}`.
    pub fn conjugate(&self, w: &FreeWord) -> FreeWord {
        self.concat(w).concat(&self.inverse())
    }
}

impl std::fmt::Display for FreeWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if l > 0 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

/// An endomorphism of the free group on `rank` generators, given by the
/// images of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeEndo {
    images: Vec<FreeWord>,
}

impl FreeEndo {
    pub fn identity(rank: usize) -> Self {
        FreeEndo {
            images: (1..=rank as i32).map(FreeWord::letter).collect(),
        }
    }

    pub fn new(images: Vec<FreeWord>) -> Self {
        FreeEndo { images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Image of generator `x_g` (1-based).
    pub fn image(&self, g: usize) -> &FreeWord {
        &self.images[g - 1]
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = FreeWord::identity();
        for &l in w.letters() {
            let img = &self.images[(l.unsigned_abs() as usize) - 1];
            if l > 0 {
                out = out.concat(img);
            } else {
                out = out.concat(&img.inverse());
            }
        }
        out
    }

    /// `self.then(g)` maps `x ↦ g(self(x))`.
    pub fn then(&self, g: &FreeEndo) -> FreeEndo {
        FreeEndo {
            images: self.images.iter().map(|w| g.apply(w)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, w)| w.letters() == [(k + 1) as i32])
    }
}
