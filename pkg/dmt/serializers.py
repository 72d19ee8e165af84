# serializers.py
from django.conf import settings
from rest_framework import serializers

from .exceptions import InvalidConfig
from .models import ChannelExponents, MultiplexingGains, Scheme
from .presets import PRESET_CHOICES, PRESETS

DEFAULT_SNR_GRID = "30:80:10"


def parse_snr_grid(value):
    """
    "start:stop:step" (stop included), "30,40,50" or a list of numbers
    """
    if isinstance(value, str):
        if ":" in value:
            start, stop, step = (float(part) for part in value.split(":"))
            if step <= 0 or stop < start:
                raise ValueError("range must satisfy start <= stop and step > 0")
            count = int(round((stop - start) / step))
            return [round(start + i * step, 10) for i in range(count + 1)]
        return [float(part) for part in value.split(",") if part.strip()]
    return [float(part) for part in value]


class SnrGridField(serializers.Field):
    default_error_messages = {
        'invalid': 'Expected "start:stop:step", a comma-separated list or a list of numbers.',
        'too_short': 'SNR grid needs at least 3 points.',
        'not_increasing': 'SNR grid must be strictly increasing.',
    }

    def to_internal_value(self, data):
        try:
            grid = parse_snr_grid(data)
        except (TypeError, ValueError):
            self.fail('invalid')
        if len(grid) < 3:
            self.fail('too_short')
        if any(b <= a for a, b in zip(grid, grid[1:])):
            self.fail('not_increasing')
        return grid

    def to_representation(self, value):
        return list(value)


class RunConfigSerializer(serializers.Serializer):
    """
    One run configuration for every command and endpoint. Values come from a
    JSON document, command-line flags or a request body; unknown keys are
    rejected.
    """
    preset = serializers.ChoiceField(choices=PRESET_CHOICES, required=False)
    scheme = serializers.ChoiceField(choices=Scheme.choices, required=False)
    alpha = serializers.FloatField(required=False, min_value=0.0)
    beta = serializers.FloatField(required=False, min_value=0.0)
    gamma = serializers.FloatField(required=False, min_value=0.0)
    r1 = serializers.FloatField(default=0.0, min_value=0.0, max_value=1.0)
    r2 = serializers.FloatField(default=0.0, min_value=0.0, max_value=1.0)
    r_step = serializers.FloatField(default=0.01, min_value=0.0001, max_value=1.0)
    r2_ratio = serializers.FloatField(default=1.0, min_value=0.0)
    snr_grid = SnrGridField(default=DEFAULT_SNR_GRID)
    trials = serializers.IntegerField(default=100000, min_value=1000)
    seed = serializers.IntegerField(default=0, min_value=0, max_value=2**64 - 1)
    event_floor = serializers.IntegerField(default=lambda: settings.ICR_DMT_EVENT_FLOOR, min_value=1)
    tolerance = serializers.FloatField(default=lambda: settings.ICR_DMT_SLOPE_TOLERANCE, min_value=0.0)
    samples = serializers.IntegerField(default=1000, min_value=1)
    step = serializers.FloatField(default=lambda: settings.ICR_DMT_ORACLE_STEP)
    out = serializers.CharField(default="-")
    threads = serializers.IntegerField(required=False, min_value=1)
    extended = serializers.BooleanField(default=False)

    def to_internal_value(self, data):
        if hasattr(data, 'keys'):
            unknown = sorted(set(data.keys()) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({key: ["Unknown configuration key."] for key in unknown})
        return super().to_internal_value(data)

    def validate_snr_grid(self, value):
        if isinstance(value, str):
            return SnrGridField().to_internal_value(value)
        return value

    def validate(self, attrs):
        base = PRESETS.get(attrs.get('preset'), ChannelExponents(1.0, 1.0, 1.0))
        try:
            attrs['exponents'] = ChannelExponents(
                alpha=attrs.get('alpha', base.alpha),
                beta=attrs.get('beta', base.beta),
                gamma=attrs.get('gamma', base.gamma),
            )
            attrs['gains'] = MultiplexingGains(attrs['r1'], attrs['r2'])
        except InvalidConfig as e:
            raise serializers.ValidationError(str(e.detail))
        return attrs
