# views.py
from rest_framework import status
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.views import APIView
import logging

from .presets import describe_presets
from .serializers import RunConfigSerializer
from .utils import build_eval_report, sweep_columns, sweep_rows

logger = logging.getLogger(__name__)


class HealthView(APIView):
    permission_classes = [AllowAny]

    def get(self, request):
        return Response({"status": "ok"})


class PresetListView(APIView):
    permission_classes = [AllowAny]

    def get(self, request):
        return Response(describe_presets())


class DmtEvalView(APIView):
    """
    Closed-form DMT of every scheme at one (r1, r2), same report as `dmt eval`
    """
    permission_classes = [AllowAny]

    def post(self, request):
        serializer = RunConfigSerializer(data=request.data)
        if serializer.is_valid():
            data = serializer.validated_data
            return Response(build_eval_report(data['gains'], data['exponents']))

        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)


class DmtSweepView(APIView):
    """
    Figure sweep rows, same values as `dmt sweep`
    """
    permission_classes = [AllowAny]

    def post(self, request):
        serializer = RunConfigSerializer(data=request.data)
        if serializer.is_valid():
            data = serializer.validated_data
            rows = sweep_rows(
                data['exponents'],
                r_step=data['r_step'],
                r2_ratio=data['r2_ratio'],
                extended=data['extended'],
            )
            logger.info(f"Sweep of {len(rows)} points for {data['exponents']}")
            return Response({'columns': sweep_columns(data['extended'], data['r2_ratio']), 'rows': rows})

        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)
