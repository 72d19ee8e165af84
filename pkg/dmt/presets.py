"""
Named exponent triples (alpha, beta, gamma) behind the reference DMT plots.
Each group varies one exponent with the others held fixed. Triples are
unique, so a panel shared by two groups has one name.
"""
from .models import ChannelExponents

PRESET_CHOICES = [
    ('weak_interference', 'Interference strength: weak (alpha = 0.5)'),
    ('moderate_interference', 'Interference strength: moderate (alpha = 1)'),
    ('strong_interference', 'Interference strength: strong (alpha = 2), also the strong interference beta = 1 panel'),
    ('strong_ic_beta_0.2', 'Relay-destination strength, strong interference: beta = 0.2'),
    ('strong_ic_beta_2', 'Relay-destination strength, strong interference: beta = 2'),
    ('strong_ic_beta_3', 'Relay-destination strength, strong interference: beta = 3 (CF optimal)'),
    ('weak_ic_beta_0.5', 'Relay-destination strength, weak interference: beta = 0.5'),
    ('weak_ic_beta_1', 'Relay-destination strength, weak interference: beta = 1'),
    ('weak_ic_beta_1.5', 'Relay-destination strength, weak interference: beta = 1.5'),
    ('weak_ic_beta_3', 'Relay-destination strength, weak interference: beta = 3'),
    ('df_ic_gain', 'DF gain over the interference channel (alpha = 1.8)'),
]

PRESETS = {
    'weak_interference': ChannelExponents(0.5, 1.0, 1.0),
    'moderate_interference': ChannelExponents(1.0, 1.0, 1.0),
    'strong_interference': ChannelExponents(2.0, 1.0, 1.0),
    'strong_ic_beta_0.2': ChannelExponents(2.0, 0.2, 1.0),
    'strong_ic_beta_2': ChannelExponents(2.0, 2.0, 1.0),
    'strong_ic_beta_3': ChannelExponents(2.0, 3.0, 1.0),
    'weak_ic_beta_0.5': ChannelExponents(0.5, 0.5, 1.0),
    'weak_ic_beta_1': ChannelExponents(0.5, 1.0, 1.0),
    'weak_ic_beta_1.5': ChannelExponents(0.5, 1.5, 1.0),
    'weak_ic_beta_3': ChannelExponents(0.5, 3.0, 1.0),
    'df_ic_gain': ChannelExponents(1.8, 1.0, 1.0),
}


def describe_presets():
    labels = dict(PRESET_CHOICES)
    return [
        {
            'name': name,
            'description': labels[name],
            'alpha': e.alpha,
            'beta': e.beta,
            'gamma': e.gamma,
        }
        for name, e in PRESETS.items()
    ]
