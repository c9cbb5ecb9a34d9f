//! Platonic root configurations, shipped as root-list JSON files.

use wehrl_core::PureState;

use crate::error::{CliError, CliResult};
use crate::formats::parse_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polyhedron {
    Tetrahedron,
    Octahedron,
    Cube,
    Icosahedron,
    Dodecahedron,
}

impl Polyhedron {
    pub const ALL: [Polyhedron; 5] =
        [Self::Tetrahedron, Self::Octahedron, Self::Cube, Self::Icosahedron, Self::Dodecahedron];

    /// The solid whose vertex count is 2j.
    pub fn from_twice_j(twice_j: u32) -> CliResult<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.twice_j() == twice_j)
            .ok_or_else(|| CliError::Input(format!("no Platonic configuration with 2j = {twice_j} (use 4, 6, 8, 12 or 20)")))
    }

    pub fn twice_j(self) -> u32 {
        match self {
            Self::Tetrahedron => 4,
            Self::Octahedron => 6,
            Self::Cube => 8,
            Self::Icosahedron => 12,
            Self::Dodecahedron => 20,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Tetrahedron => "tetrahedron",
            Self::Octahedron => "octahedron",
            Self::Cube => "cube",
            Self::Icosahedron => "icosahedron",
            Self::Dodecahedron => "dodecahedron",
        }
    }

    pub fn json(self) -> &'static str {
        match self {
            Self::Tetrahedron => include_str!("../fixtures/tetrahedron.json"),
            Self::Octahedron => include_str!("../fixtures/octahedron.json"),
            Self::Cube => include_str!("../fixtures/cube.json"),
            Self::Icosahedron => include_str!("../fixtures/icosahedron.json"),
            Self::Dodecahedron => include_str!("../fixtures/dodecahedron.json"),
        }
    }

    pub fn state(self) -> CliResult<PureState> {
        parse_state(self.json())
    }

    /// Vertex directions before normalization.
    pub fn vertices(self) -> Vec<[f64; 3]> {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let signs = [1.0, -1.0];
        let mut cube = Vec::new();
        let cyclic = |a: f64, b: f64| {
            let mut v = Vec::new();
            for sa in signs {
                for sb in signs {
                    let (a, b) = (sa * a, sb * b);
                    v.extend([[0.0, a, b], [a, b, 0.0], [b, 0.0, a]]);
                }
            }
            v
        };
        for x in signs {
            for y in signs {
                for z in signs {
                    cube.push([x, y, z]);
                }
            }
        }
        match self {
            Self::Tetrahedron => vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]],
            Self::Octahedron => vec![
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ],
            Self::Cube => cube,
            Self::Icosahedron => cyclic(1.0, phi),
            Self::Dodecahedron => [cube, cyclic(1.0 / phi, phi)].concat(),
        }
    }
}
