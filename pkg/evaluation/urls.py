from django.urls import path
from . import views

app_name = 'evaluation'

urlpatterns = [
    # Stored evaluation runs
    path('runs/', views.EvaluationRunListView.as_view(), name='run_list'),
    path('runs/<int:run_id>/', views.EvaluationRunDetailView.as_view(), name='run_detail'),
]
