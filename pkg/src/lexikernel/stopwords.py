"""Default English stop-word list.

Function words (articles, prepositions, pronouns, auxiliaries and the like)
carry no category content, so definition analysis discards them. The list
is deliberately conservative; callers can always supply their own file.
"""

DEFAULT_STOP_WORDS = frozenset(
    """
    a about above after again against all almost also am an and any are as at
    be because been before being below between both but by can cannot could
    did do does doing down during each either few for from further had has
    have having he her here hers herself him himself his how i if in into is
    it its itself just me more most must my myself neither no nor not of off
    on once only onto or other our ours ourselves out over own same shall she
    should so some such than that the their theirs them themselves then there
    these they this those through to too under until up upon very was we were
    what when where which while who whom why will with would you your yours
    yourself yourselves
    """.split()
)
