#![allow(clippy::excessive_precision)]

/// `E_α(x)` from 400-term partial sums in 40-digit arithmetic (mpmath 1.3).
pub const ML_FIXTURES: [(f64, f64, f64); 47] = [
    (0.1, -1.0, 0.48556446431108210239),
    (0.1, -0.5, 0.6543244602880019291),
    (0.1, 0.25, 1.3541310896000040478),
    (0.1, 0.5, 2.0770042471194151832),
    (0.1, 1.0, 23.160534598113206421),
    (0.3, -2.0, 0.29023222616787535326),
    (0.3, -1.0, 0.45659440832969066901),
    (0.3, -0.5, 0.63264900594359902138),
    (0.3, 0.25, 1.369214792301552586),
    (0.3, 0.5, 2.0620157899559994849),
    (0.3, 1.0, 8.0406755969670580104),
    (0.3, 2.0, 79485.907625183497177),
    (0.5, -2.0, 0.25539567631050574387),
    (0.5, -1.0, 0.42758357615580700441),
    (0.5, -0.5, 0.61569034419292587487),
    (0.5, 0.25, 1.3586423701047221152),
    (0.5, 0.5, 1.9523604891825570933),
    (0.5, 1.0, 5.0089800807622834663),
    (0.5, 2.0, 108.94090438997797241),
    (0.7, -2.0, 0.21378672701529726519),
    (0.7, -1.0, 0.39961197811559938437),
    (0.7, -0.5, 0.60514759205956427126),
    (0.7, 0.25, 1.3334862651530102009),
    (0.7, 0.5, 1.8249850568512024534),
    (0.7, 1.0, 3.704146145437586034),
    (0.7, 2.0, 20.966433131481951425),
    (0.9, -2.0, 0.16352830001693004885),
    (0.9, -1.0, 0.37606602142464188118),
    (0.9, -0.5, 0.60340549869586096762),
    (0.9, 0.25, 1.301276842756153131),
    (0.9, 0.5, 1.7043087220993991263),
    (0.9, 1.0, 2.9749390749704474465),
    (0.9, 2.0, 9.6049277845715013047),
    (1.5, -2.0, 0.029430685602826471728),
    (1.5, -1.0, 0.39662936531808808449),
    (1.5, -0.5, 0.66323679487242795678),
    (1.5, 0.25, 1.1987838697983747192),
    (1.5, 0.5, 1.4202702357049505227),
    (1.5, 1.0, 1.9394872614337489665),
    (1.5, 2.0, 3.3487008963183954036),
    (2.5, -2.0, 0.43096547375967247984),
    (2.5, -1.0, 0.70736124364281795645),
    (2.5, -0.5, 0.85162388824386676372),
    (2.5, 0.25, 1.0757472255519545849),
    (2.5, 0.5, 1.1525428128694728303),
    (2.5, 1.0, 1.3093059741717626235),
    (2.5, 2.0, 1.6357100113470297685),
];

/// `E_0.5(0.5^0.5)`, same oracle.
pub const ML_POWER_HALF_HALF: f64 = 2.7742859576700095503;
