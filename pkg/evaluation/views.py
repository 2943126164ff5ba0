from rest_framework import status
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.generics import ListAPIView, RetrieveAPIView
from .models import EvaluationRun
from .serializers import EvaluationRunSerializer
import logging

logger = logging.getLogger(__name__)


class EvaluationRunListView(ListAPIView):
    """
    List stored evaluation runs, newest first
    """
    permission_classes = [AllowAny]
    serializer_class = EvaluationRunSerializer

    def get_queryset(self):
        queryset = EvaluationRun.objects.all()
        language_pair = self.request.query_params.get('language_pair')
        if language_pair:
            queryset = queryset.filter(language_pair=language_pair)
        return queryset

    def list(self, request):
        runs = self.get_serializer(self.get_queryset(), many=True).data
        return Response({'runs': runs}, status=status.HTTP_200_OK)


class EvaluationRunDetailView(RetrieveAPIView):
    """
    Get one evaluation run with its full report
    """
    permission_classes = [AllowAny]

    def get(self, request, run_id):
        try:
            run = EvaluationRun.objects.get(id=run_id)
            data = EvaluationRunSerializer(run).data
            data['report'] = run.report
            return Response(data, status=status.HTTP_200_OK)
        except EvaluationRun.DoesNotExist:
            return Response({'error': 'Evaluation run not found'}, status=status.HTTP_404_NOT_FOUND)
