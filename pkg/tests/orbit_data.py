"""Reference orbit index lists for the preset computations, as (r1, r2) fraction strings."""
from fractions import Fraction

from rayclass.siegel import SiegelIndex

LEVEL_185 = [
    "0 1/185", "31/37 76/185", "18/37 141/185", "26/37 56/185", "15/37 61/185",
    "3/37 131/185", "13/37 101/185", "32/37 121/185", "2/37 91/185", "36/37 161/185",
    "1/37 166/185", "35/37 81/185", "5/37 146/185", "24/37 36/185", "34/37 116/185",
    "22/37 171/185", "11/37 3/5", "19/37 51/185", "6/37 106/185", "0 36/185",
    "6/37 146/185", "19/37 81/185", "11/37 166/185", "22/37 161/185", "34/37 91/185",
    "24/37 121/185", "5/37 101/185", "35/37 131/185", "1/37 61/185", "36/37 56/185",
    "2/37 141/185", "32/37 76/185", "13/37 1/185", "3/37 106/185", "15/37 51/185",
    "26/37 3/5", "18/37 171/185", "31/37 116/185",
]

LEVEL_37 = [
    "0 1/37", "35/37 17/37", "6/37 22/37", "21/37 28/37", "5/37 5/37",
    "1/37 31/37", "29/37 13/37", "23/37 4/37", "13/37 12/37", "12/37 34/37",
    "25/37 34/37", "24/37 12/37", "14/37 4/37", "8/37 13/37", "36/37 31/37",
    "32/37 5/37", "16/37 28/37", "31/37 22/37", "2/37 17/37",
]


def parse(entries, M):
    return [SiegelIndex.from_fractions(*(Fraction(x) for x in e.split()), M) for e in entries]
