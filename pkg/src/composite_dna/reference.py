"""Reference figures for the capacity and bound tables (3-decimal values).

Rows are keyed by alphabet spec. Values are what the report compares the
computed numbers against; they are data, not something the library uses.
"""

from __future__ import annotations

ELLS = (1, 2, 3, 4, 5, 6)

# one composite letter, three mixture sizes
CAPACITY_SIGMA1 = {
    "M=AC": (1.733, 2.170, 2.271, 2.303, 2.315, 2.319),
    "M=ATC": (1.626, 2.121, 2.251, 2.295, 2.311, 2.318),
    "M=ATCG": (1.585, 2.076, 2.231, 2.287, 2.308, 2.316),
}

# two composite letters
CAPACITY_SIGMA2 = {
    "M=AT~N=CG": (1.900, 2.418, 2.535, 2.569, 2.580, 2.583),
    "M=AT,N=AG": (1.918, 2.392, 2.512, 2.554, 2.571, 2.579),
    "M=AT,N=ACG": (1.806, 2.356, 2.500, 2.550, 2.570, 2.578),
    "M=AT,N=ATG": (1.821, 2.331, 2.478, 2.536, 2.562, 2.574),
    "M=ATC,N=ATG": (1.694, 2.289, 2.465, 2.532, 2.560, 2.573),
}

# longest codeword length with a single redundant symbol, l = 3..6
BOUND_ELLS = (3, 4, 5, 6)
BOUND = {
    "M=AC": (19, 43, 102, 250),
    "M=AT~N=CG": (20, 55, 158, 463),
}

# 5x5 adjacency at l = 1 over A,T,C,G,M with M = A|C
ADJACENCY_L1_AC = (
    (0, 1, 1, 1, 0),
    (1, 0, 1, 1, 1),
    (1, 1, 0, 1, 0),
    (1, 1, 1, 0, 1),
    (0, 1, 0, 1, 0),
)
LAMBDA_L1_AC = 3.323

COMBINED_EXAMPLE = {"n": 300, "l": 6, "eps": "1/10", "redundancy": 11, "rate": 2.490}
