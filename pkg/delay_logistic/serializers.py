import math

from rest_framework import serializers

from .exceptions import LabError
from .services import ScenarioService, history_service
from .services.equation_service import Params


class ParamsSerializer(serializers.Serializer):
    """(r, alpha) with the alpha = e^-r shortcut."""
    r = serializers.FloatField()
    alpha = serializers.FloatField(required=False)
    alpha_exp = serializers.BooleanField(required=False, default=False)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        if attrs.get('alpha_exp'):
            if 'alpha' in attrs:
                raise serializers.ValidationError({'alpha': 'give either alpha or alpha_exp, not both'})
            attrs['alpha'] = math.exp(-attrs['r'])
        elif 'alpha' not in attrs:
            raise serializers.ValidationError({'alpha': 'alpha is required unless alpha_exp is set'})
        try:
            attrs['params'] = Params(attrs['r'], attrs['alpha'])
        except LabError as exc:
            raise serializers.ValidationError({'r': str(exc)})
        return attrs


class ClassifySerializer(ParamsSerializer):
    pass


class SimulateSerializer(ParamsSerializer):
    history = serializers.CharField(max_length=500)
    t_end = serializers.FloatField()
    rtol = serializers.FloatField(required=False)
    atol = serializers.FloatField(required=False)
    dt_out = serializers.FloatField(required=False, default=0.01)
    c = serializers.FloatField(required=False)

    def validate_t_end(self, value):
        if not (math.isfinite(value) and value > 0):
            raise serializers.ValidationError('t_end must be positive')
        return value

    def validate_dt_out(self, value):
        if not (math.isfinite(value) and value > 0):
            raise serializers.ValidationError('dt_out must be positive')
        return value

    def validate_c(self, value):
        if not (math.isfinite(value) and value > 0):
            raise serializers.ValidationError('c must be positive')
        return value

    def validate(self, attrs):
        attrs = super().validate(attrs)
        try:
            attrs['history_fn'] = history_service.parse_spec(attrs['history'], attrs['params'])
        except LabError as exc:
            raise serializers.ValidationError({'history': str(exc)})
        return attrs


class BoundarySerializer(serializers.Serializer):
    alpha_min = serializers.FloatField()
    alpha_max = serializers.FloatField()
    n = serializers.IntegerField(min_value=1, max_value=1000000)

    def validate(self, attrs):
        if not (-1.0 < attrs['alpha_min'] <= attrs['alpha_max'] < 1.0):
            raise serializers.ValidationError('alpha range must lie inside (-1, 1) with alpha_min <= alpha_max')
        if attrs['n'] == 1 and attrs['alpha_min'] != attrs['alpha_max']:
            raise serializers.ValidationError({'n': 'need at least two samples for a range'})
        return attrs


class VerifySerializer(serializers.Serializer):
    suite = serializers.ChoiceField(choices=ScenarioService.suite_names() + ['all'])
    seed = serializers.IntegerField(required=False, min_value=0, max_value=2 ** 64 - 1)


def error_text(errors) -> str:
    """Flatten serializer errors into one line."""
    parts = []
    for field, messages in errors.items():
        if isinstance(messages, dict):
            messages = [error_text(messages)]
        text = '; '.join(str(message) for message in messages)
        parts.append(text if field == 'non_field_errors' else f"{field}: {text}")
    return '; '.join(parts)
