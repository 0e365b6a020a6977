"""Retweet-graph community mining toolkit.

Builds weighted retweet graphs from tweet dumps, extracts their dense
k-core, partitions it with Louvain, and profiles each community with
hashtag/n-gram tables, regional histograms, offensive-tweet tallies and
metadata-based bot detection.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigError,
    CorpusFormatError,
    DataError,
    MissingScoresError,
    NoValidKError,
    PipelineError,
    TrainingError,
)
from .records import (  # noqa: F401
    Corpus,
    TweetRecord,
    UserProfile,
    filter_by_keywords,
    load_keywords,
    parse_corpus,
)
from .graph import (  # noqa: F401
    RetweetGraph,
    build_retweet_graph,
    degree,
    induced_subgraph,
    load_rtg,
    save_rtg,
    to_undirected,
    weighted_degree,
)
from .partition import (  # noqa: F401
    CoreDecomposition,
    KSelection,
    Partition,
    core_numbers,
    kcore,
    louvain,
    modularity,
    select_k,
)
