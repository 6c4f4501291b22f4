use std::fmt;

/// Two-level label: bare (`Ground`, `Excited`) or laser-dressed (`Plus`, `Minus`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TlsLabel {
    Ground,
    Excited,
    Plus,
    Minus,
}

impl TlsLabel {
    /// Slot in the two-dimensional factor. Ground and plus share slot 0.
    pub fn slot(self) -> usize {
        match self {
            TlsLabel::Ground | TlsLabel::Plus => 0,
            TlsLabel::Excited | TlsLabel::Minus => 1,
        }
    }

    pub fn is_dressed(self) -> bool {
        matches!(self, TlsLabel::Plus | TlsLabel::Minus)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            TlsLabel::Ground => "g",
            TlsLabel::Excited => "e",
            TlsLabel::Plus => "+",
            TlsLabel::Minus => "-",
        }
    }
}

impl fmt::Display for TlsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub k: usize,
    pub l: usize,
    pub s: TlsLabel,
    pub flat: usize,
}

/// Product basis TLS ⊗ mode a ⊗ mode b with flat index
/// `s·(Na+1)(Nb+1) + k·(Nb+1) + l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Basis {
    pub trunc_a: usize,
    pub trunc_b: usize,
}

impl Basis {
    pub fn new(trunc_a: usize, trunc_b: usize) -> Self {
        Self { trunc_a, trunc_b }
    }

    pub fn levels_a(&self) -> usize {
        self.trunc_a + 1
    }

    pub fn levels_b(&self) -> usize {
        self.trunc_b + 1
    }

    /// Dimension of one TLS sector.
    pub fn sector_dim(&self) -> usize {
        self.levels_a() * self.levels_b()
    }

    pub fn dim(&self) -> usize {
        2 * self.sector_dim()
    }

    /// Flat index, or `None` when a photon number exceeds the truncation.
    pub fn index(&self, k: usize, l: usize, s: TlsLabel) -> Option<usize> {
        if k > self.trunc_a || l > self.trunc_b {
            return None;
        }
        Some(s.slot() * self.sector_dim() + k * self.levels_b() + l)
    }

    /// Inverse of [`Basis::index`] using bare labels.
    pub fn label(&self, flat: usize) -> Option<BasisIndex> {
        if flat >= self.dim() {
            return None;
        }
        let s = if flat < self.sector_dim() {
            TlsLabel::Ground
        } else {
            TlsLabel::Excited
        };
        let rem = flat % self.sector_dim();
        Some(BasisIndex {
            k: rem / self.levels_b(),
            l: rem % self.levels_b(),
            s,
            flat,
        })
    }

    /// Every basis label in flat order.
    pub fn labels(&self) -> impl Iterator<Item = BasisIndex> + '_ {
        (0..self.dim()).filter_map(move |i| self.label(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_round_trip() {
        let b = Basis::new(3, 2);
        assert_eq!(b.dim(), 24);
        for lbl in b.labels() {
            assert_eq!(b.index(lbl.k, lbl.l, lbl.s), Some(lbl.flat));
        }
        assert_eq!(b.index(1, 2, TlsLabel::Excited), Some(12 + 3 + 2));
        assert_eq!(b.index(4, 0, TlsLabel::Ground), None);
        assert!(b.label(24).is_none());
    }
}
