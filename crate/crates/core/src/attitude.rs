use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// Zero-based slot for `[T; 2]` storage.
    pub fn slot(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    /// One-based label used in reports.
    pub fn number(self) -> u8 {
        self.slot() as u8 + 1
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "player {}", self.number())
    }
}

/// Degree of optimism in `[0, 1]`: 1 is full optimism, 0 full pessimism.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Attitude(f64);

impl Attitude {
    pub const OPTIMISM: Attitude = Attitude(1.0);
    pub const PESSIMISM: Attitude = Attitude(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidAttitude(value));
        }
        Ok(Attitude(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Attitude {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Attitude::new(value)
    }
}

impl From<Attitude> for f64 {
    fn from(a: Attitude) -> f64 {
        a.0
    }
}

impl fmt::Display for Attitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The two pure attitudes of the attitude game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stance {
    Optimist,
    Pessimist,
}

impl Stance {
    pub const BOTH: [Stance; 2] = [Stance::Optimist, Stance::Pessimist];

    pub fn attitude(self) -> Attitude {
        match self {
            Stance::Optimist => Attitude::OPTIMISM,
            Stance::Pessimist => Attitude::PESSIMISM,
        }
    }

    pub fn flipped(self) -> Stance {
        match self {
            Stance::Optimist => Stance::Pessimist,
            Stance::Pessimist => Stance::Optimist,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Stance::Optimist => 'O',
            Stance::Pessimist => 'P',
        }
    }
}

/// Pair of attitudes, one per player.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttitudeProfile {
    pub p1: Attitude,
    pub p2: Attitude,
}

impl AttitudeProfile {
    pub fn new(p1: Attitude, p2: Attitude) -> Self {
        Self { p1, p2 }
    }

    pub fn from_values(p1: f64, p2: f64) -> Result<Self> {
        Ok(Self::new(Attitude::new(p1)?, Attitude::new(p2)?))
    }

    pub fn get(&self, player: Player) -> Attitude {
        match player {
            Player::One => self.p1,
            Player::Two => self.p2,
        }
    }

    pub fn with(mut self, player: Player, attitude: Attitude) -> Self {
        match player {
            Player::One => self.p1 = attitude,
            Player::Two => self.p2 = attitude,
        }
        self
    }
}

impl fmt::Display for AttitudeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p1, self.p2)
    }
}

/// A corner of `{O, P}^2`, i.e. a pure profile of the attitude game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub s1: Stance,
    pub s2: Stance,
}

impl Corner {
    pub const OO: Corner = Corner::new(Stance::Optimist, Stance::Optimist);
    pub const OP: Corner = Corner::new(Stance::Optimist, Stance::Pessimist);
    pub const PO: Corner = Corner::new(Stance::Pessimist, Stance::Optimist);
    pub const PP: Corner = Corner::new(Stance::Pessimist, Stance::Pessimist);

    /// All four corners in report order.
    pub const ALL: [Corner; 4] = [Corner::OO, Corner::OP, Corner::PO, Corner::PP];

    pub const fn new(s1: Stance, s2: Stance) -> Self {
        Self { s1, s2 }
    }

    pub fn stance(&self, player: Player) -> Stance {
        match player {
            Player::One => self.s1,
            Player::Two => self.s2,
        }
    }

    pub fn with(mut self, player: Player, stance: Stance) -> Self {
        match player {
            Player::One => self.s1 = stance,
            Player::Two => self.s2 = stance,
        }
        self
    }

    /// The corner reached when `player` flips attitude unilaterally.
    pub fn deviation(&self, player: Player) -> Corner {
        self.with(player, self.stance(player).flipped())
    }

    pub fn profile(&self) -> AttitudeProfile {
        AttitudeProfile::new(self.s1.attitude(), self.s2.attitude())
    }

    /// Position in [`Corner::ALL`].
    pub fn index(&self) -> usize {
        match (self.s1, self.s2) {
            (Stance::Optimist, Stance::Optimist) => 0,
            (Stance::Optimist, Stance::Pessimist) => 1,
            (Stance::Pessimist, Stance::Optimist) => 2,
            (Stance::Pessimist, Stance::Pessimist) => 3,
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.s1.letter(), self.s2.letter())
    }
}

/// Verdict on whether one pure attitude is (weakly) dominant for a player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dominance {
    Optimism,
    Pessimism,
    /// Both inequalities hold everywhere: the attitude does not matter.
    Indifferent,
    Neither,
}

impl Dominance {
    pub fn from_margins(min_gain: f64, max_gain: f64, tol: f64) -> Dominance {
        match (min_gain >= -tol, max_gain <= tol) {
            (true, true) => Dominance::Indifferent,
            (true, false) => Dominance::Optimism,
            (false, true) => Dominance::Pessimism,
            (false, false) => Dominance::Neither,
        }
    }

    pub fn dominant_stance(self) -> Option<Stance> {
        match self {
            Dominance::Optimism => Some(Stance::Optimist),
            Dominance::Pessimism => Some(Stance::Pessimist),
            Dominance::Indifferent | Dominance::Neither => None,
        }
    }
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dominance::Optimism => "optimism dominant",
            Dominance::Pessimism => "pessimism dominant",
            Dominance::Indifferent => "indifferent",
            Dominance::Neither => "no dominant attitude",
        };
        f.write_str(s)
    }
}
