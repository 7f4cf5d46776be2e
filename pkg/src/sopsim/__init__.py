"""Strong simulation of H + diagonal + CZ circuits via rank-decomposition DP on the pinned SOP."""

from .circuit import Circuit, Gate, hadamard_depths, parse_circuit, running_example, serialize_circuit
from .dp import (Amplitude, DpTable, ResidueCounts, amplitude_from_counts, cross_parity,
                 iter_rank_dp_tables, sopcount_bucket, sopcount_fourier, sopcount_rank_dp)
from .errors import (FourierPrecisionError, ParseError, ResourceCapError, SopsimError, UsageError,
                     ValidationError)
from .families import (FamilyInstance, blowup, circuit_from_graph, complete_binary_tree,
                       random_circuit, separating_family)
from .graph import (Graph, cut_rank, gf2_rank, line_graph, parse_graph, serialize_graph,
                    tensor_network_graph, treewidth_exact, treewidth_minfill_ub)
from .oracles import sopcount_brute, statevector_amplitude
from .rankdecomp import (RankDecomposition, RootedDecomposition, caterpillar_from_order,
                         decompose_greedy_bisection, decomposition_width, linear_rankwidth_exact,
                         parse_rdec, rankwidth_exact, root_decomposition, serialize_rdec,
                         validate_decomposition)
from .simulate import SimulationResult, simulate
from .sop import SopInstance, VarId, evaluate_f, extract_sop, sop_to_dot
from .wmc import WmcFormula, encode_wmc, naive_weighted_count

__version__ = "0.1.0"
