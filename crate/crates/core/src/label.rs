//! Index labels and the small alphabets they are drawn from.

use core::fmt;

/// A value carried by one tensor index or tile edge.
///
/// Integer labels cover spins, bits, carries and G/W charges. `ω` is the
/// auxiliary non-physical value used by the open-chain tiles; it orders after
/// every integer label.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(i8);

impl Label {
    pub const OMEGA: Label = Label(i8::MAX);
    pub const MINUS: Label = Label(-1);
    pub const ZERO: Label = Label(0);
    pub const PLUS: Label = Label(1);

    pub const fn new(value: i8) -> Label {
        assert!(value != i8::MAX, "reserved for omega");
        Label(value)
    }

    pub const fn value(self) -> Option<i8> {
        if self.0 == i8::MAX {
            None
        } else {
            Some(self.0)
        }
    }

    pub const fn is_omega(self) -> bool {
        self.0 == i8::MAX
    }

    pub fn bit(b: bool) -> Label {
        Label(b as i8)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("ω"),
        }
    }
}

/// The finite label sets used on tensor indices.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alphabet {
    /// Spin-1 values / vertical carries: {-1, 0, 1}.
    Spin,
    /// Horizontal height bits: {0, 1}.
    Bit,
    /// Spin-1 values extended by ω: {-1, 0, 1, ω}.
    SpinOmega,
    /// G-tensor outputs and W-tensor inputs: {-1, 1}.
    PlusMinus,
    /// Spin-1/2 values; label ±1 stands for ±½.
    HalfSpin,
}

const SPIN: [Label; 3] = [Label(-1), Label(0), Label(1)];
const BIT: [Label; 2] = [Label(0), Label(1)];
const SPIN_OMEGA: [Label; 4] = [Label(-1), Label(0), Label(1), Label::OMEGA];
const PLUS_MINUS: [Label; 2] = [Label(-1), Label(1)];

impl Alphabet {
    pub fn labels(self) -> &'static [Label] {
        match self {
            Alphabet::Spin => &SPIN,
            Alphabet::Bit => &BIT,
            Alphabet::SpinOmega => &SPIN_OMEGA,
            Alphabet::PlusMinus | Alphabet::HalfSpin => &PLUS_MINUS,
        }
    }

    pub fn contains(self, label: Label) -> bool {
        self.labels().contains(&label)
    }

    pub fn size(self) -> usize {
        self.labels().len()
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::Spin => "spin",
            Alphabet::Bit => "bit",
            Alphabet::SpinOmega => "spin_omega",
            Alphabet::PlusMinus => "plus_minus",
            Alphabet::HalfSpin => "half_spin",
        }
    }

    pub fn from_name(name: &str) -> Option<Alphabet> {
        [
            Alphabet::Spin,
            Alphabet::Bit,
            Alphabet::SpinOmega,
            Alphabet::PlusMinus,
            Alphabet::HalfSpin,
        ]
        .into_iter()
        .find(|a| a.name() == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_sorts_last_and_has_no_value() {
        assert!(Label::PLUS < Label::OMEGA);
        assert!(Label::MINUS < Label::ZERO);
        assert_eq!(Label::OMEGA.value(), None);
        assert_eq!(Label::new(-1).value(), Some(-1));
    }

    #[test]
    fn alphabets() {
        assert_eq!(Alphabet::SpinOmega.size(), 4);
        assert!(!Alphabet::Spin.contains(Label::OMEGA));
        assert!(!Alphabet::Bit.contains(Label::MINUS));
        assert_eq!(Alphabet::from_name("half_spin"), Some(Alphabet::HalfSpin));
    }
}
