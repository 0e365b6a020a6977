"""Published reference tallies from the 2022 French election retweet study
this pipeline reconstructs, plus the arithmetic cross-checks run over them.

The offensive-tweet proportions reproduce exactly when offensive/unique is
truncated to 3 decimals (the convention offense.offense_proportion uses).
In the bot table, bots/accounts reproduces within ±0.001 for every row,
but the automated-tweet proportion column does not follow from its own row
counts; recomputation therefore flags those rows instead of matching them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .offense import offense_proportion

# community label, accounts, three most frequent hashtags
COMMUNITY_ROWS = (
    ("Mélenchon", 15_001, ("melenchonvagagner", "melenchonsecondtour", "jevotemelenchon")),
    ("Anti-Macron", 12_428, ("macrondehors", "toutsaufmacron", "macrondegage")),
    ("Zemmour", 12_101, ("zemmourpresident", "jevotezemmour", "zemmourpresident2022")),
    ("Macron", 5_816, ("avecvous", "macron2022", "5ansdeplus")),
    ("Pécresse", 1_035, ("valeriepresidente", "pecresse2022", "nouvellefrance")),
    ("Le Pen", 1_001, ("marinepresidente", "dimanchejevotemarine", "jevotemarine")),
    ("Jadot", 196, ("jadot2022", "jevotejadot", "totalsoutienàjadot")),
)

# community label, unique tweets, offensive tweets, published proportion
OFFENSE_ROWS = (
    ("Mélenchon", 756_318, 208_178, 0.275),
    ("Anti-Macron", 549_138, 168_685, 0.307),
    ("Zemmour", 1_034_538, 316_214, 0.305),
    ("Macron", 468_138, 126_122, 0.269),
    ("Pécresse", 80_365, 19_487, 0.242),
    ("Le Pen", 86_272, 25_368, 0.294),
    ("Jadot", 12_340, 1_632, 0.132),
)

# community label, accounts, bots, published bot proportion,
# tweets (retweets included), automated tweets, published automated proportion
BOT_ROWS = (
    ("Mélenchon", 15_001, 2_507, 0.167, 5_755_664, 1_273_656, 0.284),
    ("Anti-Macron", 12_428, 2_181, 0.175, 5_435_820, 1_268_240, 0.304),
    ("Zemmour", 12_101, 2_217, 0.183, 6_160_153, 1_501_207, 0.322),
    ("Macron", 5_816, 1_001, 0.172, 2_219_491, 514_820, 0.302),
    ("Pécresse", 1_035, 208, 0.200, 408_319, 134_373, 0.490),
    ("Le Pen", 1_001, 184, 0.184, 463_290, 127_633, 0.380),
    ("Jadot", 196, 30, 0.153, 66_541, 19_876, 0.426),
)

OFFENSE_TOLERANCE = 0.0005
BOT_TOLERANCE = 0.001


@dataclass
class OffenseCheck:
    community: str
    unique_tweets: int
    offensive_tweets: int
    computed: float
    published: float
    matches: bool


@dataclass
class BotCheck:
    community: str
    computed_bot_proportion: float
    published_bot_proportion: float
    bot_matches: bool
    computed_automated_proportion: float
    published_automated_proportion: float
    automated_matches: bool


def check_offense_rows() -> list[OffenseCheck]:
    """Recompute each offensive proportion from its two counts."""
    checks = []
    for label, unique, offensive, published in OFFENSE_ROWS:
        computed = offense_proportion(offensive, unique)
        checks.append(
            OffenseCheck(
                community=label,
                unique_tweets=unique,
                offensive_tweets=offensive,
                computed=computed,
                published=published,
                matches=abs(computed - published) <= OFFENSE_TOLERANCE,
            )
        )
    return checks


def check_bot_rows() -> list[BotCheck]:
    """Recompute both bot-table ratios; deviations beyond ±0.001 are flagged."""
    checks = []
    for label, accounts, bots, pub_bot, tweets, automated, pub_auto in BOT_ROWS:
        bot_ratio = bots / accounts
        auto_ratio = automated / tweets
        checks.append(
            BotCheck(
                community=label,
                computed_bot_proportion=round(bot_ratio, 3),
                published_bot_proportion=pub_bot,
                bot_matches=abs(bot_ratio - pub_bot) <= BOT_TOLERANCE,
                computed_automated_proportion=round(auto_ratio, 3),
                published_automated_proportion=pub_auto,
                automated_matches=abs(auto_ratio - pub_auto) <= BOT_TOLERANCE,
            )
        )
    return checks
