"""Rule-based matching of reified n-ary tuples over a knowledge base."""

from .config import MatchingConfig, load_config
from .errors import ConfigError, ParseError, TupleMatchError, UnknownEntityError, VocabularyError
from .kb import KnowledgeBase, OntologyView, load_kb
from .preorder import UNKNOWN, LinkClosure, OntoSubsumption, Subset, arg_equiv, arg_leq
from .rules import MatchLink, RelatednessLevel, SourceMatrix, match_all, match_pair, similarity, ssd
from .tuples import TupleRecord, aggregate, extract_tuples

__version__ = "0.1.0"
